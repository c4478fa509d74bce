//! Independent numeric verification: Gaussian-pairing checks of the
//! closed-form transforms through Hecke's identity, Hadamard-subtraction
//! cross-checks, and numeric Laurent fits of the exact tail family.
//!
//! Hecke's identity `F{Y_k e^{-r^2/2}} = (2 pi)^{n/2} i^k Y_k(u) e^{-s^2/2}`
//! is admitted as ground truth: it is independent of every formula under
//! test and reduces each side of the pairing
//! `<F{r^lambda Y_k}, phi> = <r^lambda Y_k, F{phi}>` to a one-dimensional
//! radial integral evaluated by adaptive quadrature (with Hadamard
//! subtraction where a finite part is required).

use std::time::Instant;

use num::{One, Zero};

use crate::finitepart::{fp_radial_integral, RadialIntegrand};
use crate::scalars::rat_to_f64;
pub use crate::quad::{quad_adaptive, Interval};
use crate::{rat, rat_int, Error, Rat, Result};

/// Outcome of one verification case.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub case_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub tol: f64,
    pub passed: bool,
    pub runtime_ms: f64,
}

impl VerificationReport {
    fn from_sides(case_id: String, lhs: f64, rhs: f64, tol: f64, start: Instant) -> Self {
        let scale = rhs.abs().max(lhs.abs());
        // absolute error for near-zero targets, relative otherwise
        let rel_error = if scale < 1e-12 { (lhs - rhs).abs() } else { (lhs - rhs).abs() / scale };
        VerificationReport {
            case_id,
            lhs,
            rhs,
            rel_error,
            tol,
            passed: rel_error <= tol,
            runtime_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Registered verification cases.
#[derive(Debug, Clone)]
pub enum OracleCase {
    /// Gaussian pairing of the closed-form power transform (`k = 0` is the
    /// plain radial formula, `k >= 1` the harmonic one).
    GaussianPairing { lambda: Rat, k: u32, n: u32 },
    /// Gaussian pairing of the resonant power-log transform of
    /// `Pf(r^{-n-2m})`.
    ResonantPairing { m: u32, n: u32 },
    /// `F.p. int_0^inf r^{-1} e^{-r^2/2} dr = (ln2 - gamma)/2`.
    HadamardLog,
    /// Numeric Laurent fit of the exact tail family at its double pole.
    TailLaurent { a: Rat, b: Rat, beta: Rat, x0: Rat },
}

impl OracleCase {
    pub fn id(&self) -> String {
        match self {
            OracleCase::GaussianPairing { lambda, k, n } => {
                let tag = if *k == 0 { "eq2" } else { "a7" };
                format!("{tag}_n{n}_k{k}_lambda{lambda}")
            }
            OracleCase::ResonantPairing { m, n } => format!("lemma25_m{m}_n{n}"),
            OracleCase::HadamardLog => "hadamard_log".into(),
            OracleCase::TailLaurent { a, b, beta, x0 } => {
                format!("example1_a{a}_b{b}_beta{beta}_x0{x0}")
            }
        }
    }
}

/// Gaussian radial moment `F.p. int_0^inf r^e e^{-r^2/2} dr` by Hadamard
/// subtraction: subtracts the Taylor terms of the Gaussian whose powers are
/// not integrable and adds their finite parts back.
fn gaussian_radial_moment(exponent: &Rat, tol: f64) -> Result<f64> {
    let e = rat_to_f64(exponent);
    let core = move |r: f64| (-r * r / 2.0).exp() * r.powf(e);
    // jet entries: exponents e + 2j with Gaussian Taylor coefficients,
    // subtracted while the power is not integrable against dr
    let mut jet: Vec<(Rat, f64)> = Vec::new();
    let mut j = 0i64;
    let mut coeff = 1.0f64;
    let mut cur = exponent.clone();
    while rat_to_f64(&cur) <= -1.0 + 1e-12 {
        jet.push((cur.clone(), coeff));
        j += 1;
        coeff *= -0.5 / j as f64;
        cur += rat_int(2);
    }
    let remainder_order = cur;
    let integrand =
        RadialIntegrand { n: 1, core: &core, subtracted: None, jet, remainder_order };
    Ok(fp_radial_integral(&integrand, tol)?.re)
}

/// Runs one case at the stated tolerance.
pub fn verify_case(case: &OracleCase, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let quad_tol = (tol * 1e-2).max(1e-13);
    match case {
        OracleCase::GaussianPairing { lambda, k, n } => {
            // both sides of <F{r^l Y_k}, Y_k e^{-s^2/2}> = <r^l Y_k, F{...}>
            // reduced by Hecke's identity; i^k and |Y_k|^2 cancel.
            let g = |x: f64| statrs::function::gamma::gamma(x);
            let l = rat_to_f64(lambda);
            let nf = *n as f64;
            let kf = *k as f64;
            let coefficient = std::f64::consts::PI.powf(nf / 2.0)
                * 2f64.powf(l + nf)
                * g((kf + nf + l) / 2.0)
                / g((kf - l) / 2.0);
            // left: coefficient * F.p. int s^{k - l - 1} e^{-s^2/2} ds
            let i_s = gaussian_radial_moment(&(rat_int(*k as i64) - lambda - Rat::one()), quad_tol)?;
            // right: (2 pi)^{n/2} * F.p. int r^{l + k + n - 1} e^{-r^2/2} dr
            let i_r = gaussian_radial_moment(
                &(lambda + rat_int(*k as i64 + *n as i64 - 1)),
                quad_tol,
            )?;
            let lhs = coefficient * i_s;
            let rhs = (2.0 * std::f64::consts::PI).powf(nf / 2.0) * i_r;
            Ok(VerificationReport::from_sides(case.id(), lhs, rhs, tol, start))
        }
        OracleCase::ResonantPairing { m, n } => {
            // closed form of F{Pf(r^{-n-2m})} paired against a Gaussian vs
            // the Hadamard finite-part pairing of Pf(r^{-n-2m}) against the
            // transformed Gaussian
            let nf = *n as f64;
            let mf = *m as f64;
            let g = |x: f64| statrs::function::gamma::gamma(x);
            let psi = |x: f64| statrs::function::gamma::digamma(x);
            let a_m = (-1f64).powi(*m as i32) * std::f64::consts::PI.powf(nf / 2.0)
                / (g(mf + 1.0) * g(nf / 2.0 + mf));
            let kconst = psi(mf + 1.0) + psi(nf / 2.0 + mf);
            let closed_form = move |s: f64| {
                a_m * (s / 2.0).powf(2.0 * mf) * (kconst - 2.0 * (s / 2.0).ln())
            };
            let c = crate::scalars::surface_area(*n).to_f64();
            let lhs = c * quad_adaptive(
                |s: f64| closed_form(s) * (-s * s / 2.0).exp() * s.powf(nf - 1.0),
                Interval::ZeroToInfinite,
                quad_tol,
            )?
            .re;
            // right side: (2 pi)^{n/2} C F.p. int r^{-2m-1} e^{-r^2/2} dr
            let i_r = gaussian_radial_moment(&rat_int(-(2 * *m as i64) - 1), quad_tol)?;
            let rhs = (2.0 * std::f64::consts::PI).powf(nf / 2.0) * c * i_r;
            Ok(VerificationReport::from_sides(case.id(), lhs, rhs, tol, start))
        }
        OracleCase::HadamardLog => {
            let lhs = gaussian_radial_moment(&rat(-1, 1), quad_tol)?;
            let rhs = (std::f64::consts::LN_2 - 0.5772156649015329) / 2.0;
            Ok(VerificationReport::from_sides(case.id(), lhs, rhs, tol, start))
        }
        OracleCase::TailLaurent { a, b, beta, x0 } => {
            // numeric Laurent fit of the closed-form tail integral at the
            // double pole, against the exact principal part B/mu^2 - A/mu
            let fam = crate::finitepart::TailFamily {
                a: a.clone(),
                b: b.clone(),
                beta: beta.clone(),
                x0: x0.clone(),
            };
            let pole = -(beta.clone()) - Rat::one();
            let eval = |eps: f64| -> Result<f64> {
                let at = &pole + approx_rat(eps);
                match crate::finitepart::MeromorphicFamily::analytic_value(&fam, &at)? {
                    crate::finitepart::ScalarValue::Approx(f) => Ok(f.re),
                    crate::finitepart::ScalarValue::Exact(e) => Ok(e.to_f64()),
                }
            };
            let probe = |e: f64| -> Result<(f64, f64)> {
                let (p, m) = (eval(e)?, eval(-e)?);
                Ok((((p - m) * e / 2.0), ((p + m) / 2.0 * e * e)))
            };
            let (e1, e2) = (1e-3, 1e-4);
            let (c1_a, c2_a) = probe(e1)?;
            let (c1_b, c2_b) = probe(e2)?;
            // Richardson in e^2 for the order-1 coefficient; the order-2
            // coefficient converges directly
            let order1 = (c1_b * e1 * e1 - c1_a * e2 * e2) / (e1 * e1 - e2 * e2);
            let order2 = (c2_b * e1 * e1 - c2_a * e2 * e2) / (e1 * e1 - e2 * e2);
            let expect1 = -rat_to_f64(a);
            let expect2 = rat_to_f64(b);
            // fold both coefficient errors into one report
            let lhs = order1 + order2;
            let rhs = expect1 + expect2;
            let mut report = VerificationReport::from_sides(case.id(), lhs, rhs, tol, start);
            let err1 = (order1 - expect1).abs() / expect1.abs().max(1e-9);
            let err2 = (order2 - expect2).abs() / expect2.abs().max(1e-9);
            report.rel_error = err1.max(err2);
            report.passed = report.rel_error <= tol;
            Ok(report)
        }
    }
}

/// Nearest small rational to a float offset (used only to probe families at
/// rational parameters).
fn approx_rat(x: f64) -> Rat {
    let denom = 1_000_000i64;
    rat((x * denom as f64).round() as i64, denom)
}

/// Deterministic pseudo-random rationals for the tail-family cases.
fn tail_cases(count: usize) -> Vec<OracleCase> {
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 19) as i64 - 9
    };
    let mut out = Vec::new();
    while out.len() < count {
        let a = rat(next(), 1 + next().unsigned_abs() as i64);
        let b = rat(next(), 1 + next().unsigned_abs() as i64);
        let beta = rat(next(), 1 + next().unsigned_abs() as i64);
        let x0 = rat(1 + next().unsigned_abs() as i64, 1 + next().unsigned_abs() as i64);
        if a.is_zero() || b.is_zero() || x0 == Rat::one() {
            continue;
        }
        out.push(OracleCase::TailLaurent { a, b, beta, x0 });
    }
    out
}

/// Named suites for the CLI and the acceptance tests.
pub fn suite(name: &str) -> Result<Vec<OracleCase>> {
    let gaussian = || -> Vec<OracleCase> {
        let mut cases = Vec::new();
        for lambda in [rat(-5, 2), rat(-13, 10), rat(7, 10)] {
            for (n, k) in [(2u32, 0u32), (2, 1), (3, 0), (3, 1), (3, 2)] {
                cases.push(OracleCase::GaussianPairing { lambda: lambda.clone(), k, n });
            }
        }
        cases
    };
    let resonant = || {
        vec![
            OracleCase::ResonantPairing { m: 0, n: 3 },
            OracleCase::ResonantPairing { m: 1, n: 3 },
            OracleCase::ResonantPairing { m: 0, n: 2 },
        ]
    };
    match name {
        "gaussian" => Ok(gaussian()),
        "lemma25" => Ok(resonant()),
        "hadamard" => Ok(vec![OracleCase::HadamardLog]),
        "example1" => Ok(tail_cases(20)),
        "all" => {
            let mut cases = gaussian();
            cases.extend(resonant());
            cases.push(OracleCase::HadamardLog);
            cases.extend(tail_cases(20));
            Ok(cases)
        }
        other => Err(Error::Parse { detail: format!("unknown suite '{other}'") }),
    }
}

/// Runs a whole suite; the per-case tolerance is `tol` except where a case
/// carries its own contract (the Hadamard log case runs at 1e-9 when the
/// requested tolerance is looser).
pub fn run_suite(name: &str, tol: f64) -> Result<Vec<VerificationReport>> {
    let cases = suite(name)?;
    let mut reports = Vec::with_capacity(cases.len());
    for case in &cases {
        // per-case contracts: the Hadamard case is pinned at 1e-9 or
        // tighter, the resonant pairings and Laurent fits never demand more
        // than their 1e-6 contract, the Gaussian pairings follow the caller
        let case_tol = match case {
            OracleCase::HadamardLog => tol.min(1e-9),
            OracleCase::ResonantPairing { .. } | OracleCase::TailLaurent { .. } => tol.max(1e-6),
            OracleCase::GaussianPairing { .. } => tol,
        };
        reports.push(verify_case(case, case_tol)?);
    }
    reports.sort_by(|x, y| x.case_id.cmp(&y.case_id));
    Ok(reports)
}

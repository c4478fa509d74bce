//! Meromorphic parameter families with residue/finite-part queries, and
//! Hadamard finite-part radial integration by asymptotic subtraction.
//!
//! Families store their pole structure explicitly (the calculus enumerates
//! it); nothing is detected numerically. The radial integral splits as
//! `int_1^inf + int_0^1(core - jet) + sum_j c_j FP_j` with
//! `FP_j = 1/(j+n)` away from `j+n = 0` and `0` there, the finite part of
//! `-ln eps` being zero.

use num::{One, Signed, ToPrimitive, Zero};

use crate::distributions::{
    lift_constant_to_sphere_poly, pfw_simple_pole, SlAtom, SlThickDistribution, ThickAtom,
    ThickDistribution,
};
use crate::quad::{quad_adaptive, Interval};
use crate::scalars::{
    c_const, rat_to_f64, surface_area, ExactScalar, FloatApprox, Weight,
};
use crate::sphere::{AngularFunction, MultiPoly};
use crate::{rat_int, Error, Rat, Result};

/// Query kinds for [`fp_query`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpKind {
    FinitePart,
    Residue,
    PrincipalPart,
}

/// Query result: a single value or the full principal-part list
/// (`coeffs[0]` multiplies `(lambda - lambda_0)^{-1}`, `coeffs[1]` the
/// `(lambda - lambda_0)^{-2}` term, ...).
#[derive(Debug, Clone, PartialEq)]
pub enum FpResult<V> {
    Value(V),
    PrincipalPart(Vec<V>),
}

/// A family of values meromorphic in a rational parameter: analytic
/// evaluation off poles plus explicit principal parts and finite parts at
/// every pole.
pub trait MeromorphicFamily {
    type Value: Clone;

    /// Zero of the value space (residue queries at analytic points).
    fn zero_value(&self) -> Self::Value;

    /// Principal part at `at`, `None` when the family is analytic there.
    fn principal_part(&self, at: &Rat) -> Option<Vec<Self::Value>>;

    /// Analytic value; must not be called at a pole.
    fn analytic_value(&self, at: &Rat) -> Result<Self::Value>;

    /// Regular (finite-part) value at a pole.
    fn finite_part_at_pole(&self, at: &Rat) -> Result<Self::Value>;
}

/// Uniform query surface over any meromorphic family.
pub fn fp_query<F: MeromorphicFamily>(
    family: &F,
    at: &Rat,
    kind: FpKind,
) -> Result<FpResult<F::Value>> {
    match family.principal_part(at) {
        None => match kind {
            FpKind::FinitePart => Ok(FpResult::Value(family.analytic_value(at)?)),
            FpKind::Residue => Ok(FpResult::Value(family.zero_value())),
            FpKind::PrincipalPart => Ok(FpResult::PrincipalPart(Vec::new())),
        },
        Some(parts) => match kind {
            FpKind::FinitePart => Ok(FpResult::Value(family.finite_part_at_pole(at)?)),
            FpKind::Residue => Ok(FpResult::Value(
                parts.first().cloned().unwrap_or_else(|| family.zero_value()),
            )),
            FpKind::PrincipalPart => Ok(FpResult::PrincipalPart(parts)),
        },
    }
}

/// Scalar values produced by scalar-valued families.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Exact(ExactScalar),
    Approx(FloatApprox),
}

impl ScalarValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ScalarValue::Exact(e) => e.to_f64(),
            ScalarValue::Approx(f) => f.re,
        }
    }
}

/// The gamma function as a meromorphic family: simple poles at the
/// non-positive integers with residue `(-1)^k / k!` and finite part
/// `(-1)^k psi(k+1) / k!`.
pub struct GammaFamily;

impl MeromorphicFamily for GammaFamily {
    type Value = ScalarValue;

    fn zero_value(&self) -> ScalarValue {
        ScalarValue::Exact(ExactScalar::zero())
    }

    fn principal_part(&self, at: &Rat) -> Option<Vec<ScalarValue>> {
        if at.denom().is_one() && !at.is_positive() {
            let k = (-at.numer().to_i64()?) as u32;
            let (residue, _) = crate::scalars::gamma_laurent(k);
            Some(vec![ScalarValue::Exact(residue)])
        } else {
            None
        }
    }

    fn analytic_value(&self, at: &Rat) -> Result<ScalarValue> {
        match crate::scalars::gamma_half(at) {
            Ok(v) => Ok(ScalarValue::Exact(v)),
            Err(Error::NonPositiveOrNonHalfInteger) => {
                let x = rat_to_f64(at);
                let v = statrs::function::gamma::gamma(x);
                Ok(ScalarValue::Approx(FloatApprox::real(v, v.abs() * 1e-13)))
            }
            Err(e) => Err(e),
        }
    }

    fn finite_part_at_pole(&self, at: &Rat) -> Result<ScalarValue> {
        let k = (-at.numer().to_i64().ok_or(Error::UnknownPoleStructure)?) as u32;
        let (_, finite) = crate::scalars::gamma_laurent(k);
        Ok(ScalarValue::Exact(finite))
    }
}

/// Exact tail family `F(lambda) = F.p. int_{x0}^inf x^lambda (A x^beta +
/// B x^beta ln x) dx`, meromorphic with one double pole at
/// `lambda = -beta - 1`, principal part `B/mu^2 - A/mu` in
/// `mu = lambda + beta + 1`.
pub struct TailFamily {
    pub a: Rat,
    pub b: Rat,
    pub beta: Rat,
    pub x0: Rat,
}

impl MeromorphicFamily for TailFamily {
    type Value = ScalarValue;

    fn zero_value(&self) -> ScalarValue {
        ScalarValue::Exact(ExactScalar::zero())
    }

    fn principal_part(&self, at: &Rat) -> Option<Vec<ScalarValue>> {
        let pole = -(&self.beta) - Rat::one();
        if *at == pole {
            Some(vec![
                ScalarValue::Exact(ExactScalar::from_rational(-self.a.clone())),
                ScalarValue::Exact(ExactScalar::from_rational(self.b.clone())),
            ])
        } else {
            None
        }
    }

    fn analytic_value(&self, at: &Rat) -> Result<ScalarValue> {
        // closed form: -A x0^mu / mu + B (x0^mu / mu^2 - x0^mu ln x0 / mu)
        let mu = at + &self.beta + Rat::one();
        let muf = rat_to_f64(&mu);
        let x0 = rat_to_f64(&self.x0);
        let x0mu = x0.powf(muf);
        let v = -rat_to_f64(&self.a) * x0mu / muf
            + rat_to_f64(&self.b) * (x0mu / (muf * muf) - x0mu * x0.ln() / muf);
        Ok(ScalarValue::Approx(FloatApprox::real(v, v.abs() * 1e-12 + 1e-300)))
    }

    fn finite_part_at_pole(&self, _at: &Rat) -> Result<ScalarValue> {
        // expand x0^mu: F.p. = -A ln x0 - B ln^2(x0) / 2, numeric
        let x0 = rat_to_f64(&self.x0);
        let v = -rat_to_f64(&self.a) * x0.ln() - rat_to_f64(&self.b) * x0.ln().powi(2) / 2.0;
        Ok(ScalarValue::Approx(FloatApprox::real(v, v.abs() * 1e-12 + 1e-300)))
    }
}

/// Which finite-part power family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    AtZero,
    AtInfinity,
}

/// The thick family `lambda -> Pf(r^lambda)`: simple poles at every
/// negative integer `k` with residue `C delta_*^[-k-n]`, finite part
/// `Pf(r^k)`.
pub struct PfAtZeroFamily {
    pub n: u32,
}

impl MeromorphicFamily for PfAtZeroFamily {
    type Value = ThickDistribution;

    fn zero_value(&self) -> ThickDistribution {
        ThickDistribution::zero(self.n)
    }

    fn principal_part(&self, at: &Rat) -> Option<Vec<ThickDistribution>> {
        if !at.denom().is_one() {
            return None;
        }
        let k = at.numer().to_i64()?;
        if k >= 0 {
            return None;
        }
        let residue = ThickDistribution::single(
            self.n,
            ThickAtom::Delta {
                order: -k - self.n as i64,
                density: AngularFunction::constant(self.n, surface_area(self.n)),
            },
        );
        Some(vec![residue])
    }

    fn analytic_value(&self, at: &Rat) -> Result<ThickDistribution> {
        Ok(ThickDistribution::single(
            self.n,
            ThickAtom::Pf { lambda: at.clone(), density: AngularFunction::one(self.n) },
        ))
    }

    fn finite_part_at_pole(&self, at: &Rat) -> Result<ThickDistribution> {
        self.analytic_value(at)
    }
}

/// The sl-thick family `lambda -> PfW(s^lambda)`: simple poles with residue
/// `-C delta_inf^[-n-m]` on the complement of the analytic and double-pole
/// integer sets, double poles at `lambda = -n - 2q` with principal part
/// `c_{q,n} grad^{2q} delta(u) / (2q)!` (order one) and
/// `C delta_{ln,inf}^[2q]` (order two); the finite part at any pole is
/// `PfW(s^m)`.
pub struct PfAtInfinityFamily {
    pub n: u32,
}

impl MeromorphicFamily for PfAtInfinityFamily {
    type Value = SlThickDistribution;

    fn zero_value(&self) -> SlThickDistribution {
        SlThickDistribution::zero(self.n)
    }

    fn principal_part(&self, at: &Rat) -> Option<Vec<SlThickDistribution>> {
        if !at.denom().is_one() {
            return None;
        }
        let n = self.n;
        let m = at.numer().to_i64()?;
        if pfw_simple_pole(m, n) {
            let residue = SlThickDistribution::single(
                n,
                SlAtom::DeltaInf {
                    order: -(n as i64) - m,
                    density: AngularFunction::constant(n, surface_area(n).neg()),
                },
            );
            return Some(vec![residue]);
        }
        if m <= -(n as i64) && (m + n as i64) % 2 == 0 {
            let q = ((-(n as i64) - m) / 2) as u32;
            // order-1 coefficient: c_{q,n} grad^{2q} delta(u) / (2q)!
            let mut fact = Rat::one();
            for j in 2..=(2 * q) as i64 {
                fact *= rat_int(j);
            }
            let weight = c_const(q, n).mul_rational(&fact.recip());
            let order1 = SlThickDistribution::single(
                n,
                SlAtom::DerivDeltaOrigin { k: 0, q, poly: MultiPoly::constant(n, weight) },
            );
            // order-2 coefficient: C delta_{ln,inf}^[2q]
            let density = lift_constant_to_sphere_poly(n, 2 * q);
            let order2 = SlThickDistribution::single(
                n,
                SlAtom::DeltaLnInf {
                    order: 2 * q as i64,
                    density: crate::sphere::SpherePoly {
                        n,
                        q: 2 * q,
                        poly: density.poly.scale(&surface_area(n)),
                    },
                },
            );
            return Some(vec![order1, order2]);
        }
        None
    }

    fn analytic_value(&self, at: &Rat) -> Result<SlThickDistribution> {
        Ok(SlThickDistribution::single(
            self.n,
            SlAtom::PfW { lambda: at.clone(), density: AngularFunction::one(self.n) },
        ))
    }

    fn finite_part_at_pole(&self, at: &Rat) -> Result<SlThickDistribution> {
        self.analytic_value(at)
    }
}

/// Builds the finite-part power family on the requested side.
pub fn pf_power_family_at_zero(n: u32) -> PfAtZeroFamily {
    PfAtZeroFamily { n }
}

pub fn pf_power_family_at_infinity(n: u32) -> PfAtInfinityFamily {
    PfAtInfinityFamily { n }
}

// ---------------------------------------------------------------------------
// Hadamard finite-part radial integration

/// Radial integrand for `F.p. int_0^infty core(r) r^{n-1} dr`: a rapidly
/// decaying core together with the coefficients of its singular expansion
/// at 0, `core(r) - sum c_e r^e = O(r^{J + eps})`.
///
/// Exponents are rational so finite-part powers with non-integer `lambda`
/// can reuse this machinery.
pub struct RadialIntegrand<'a> {
    pub n: u32,
    pub core: &'a dyn Fn(f64) -> f64,
    /// Optional exact form of `core - jet` on (0,1), to avoid cancellation.
    pub subtracted: Option<&'a dyn Fn(f64) -> f64>,
    /// `(exponent, coefficient)` pairs of the jet at 0.
    pub jet: Vec<(Rat, f64)>,
    /// Declared order of the subtracted remainder:
    /// `core - jet = O(r^remainder_order)` near 0.
    pub remainder_order: Rat,
}

/// Hadamard finite part of the radial integral
/// `F.p. int_0^infty core(r) r^{n-1} dr`, split as the tail `[1, inf)`, the
/// jet-subtracted head `(0, 1]` and the exact finite parts of the jet
/// terms: `F.p. int_0^1 r^{e+n-1} dr = 1/(e+n)` for `e+n != 0` and `0` for
/// `e+n = 0`.
///
/// The ambient-space integral over `R^n` is `C` times this value; see
/// [`fp_integral_ambient`].
pub fn fp_radial_integral(f: &RadialIntegrand<'_>, tol: f64) -> Result<FloatApprox> {
    let n = f.n;
    // the subtracted remainder times r^{n-1} must be integrable on (0,1)
    if f.remainder_order <= rat_int(-(n as i64)) {
        return Err(Error::InsufficientJet);
    }
    let nm1 = (n - 1) as i32;
    let tail_f = |r: f64| (f.core)(r) * r.powi(nm1);
    let tail = quad_adaptive(tail_f, Interval::UpperInfinite(1.0), tol / 3.0)?;

    let jet = f.jet.clone();
    let head_f: Box<dyn Fn(f64) -> f64> = match f.subtracted {
        Some(s) => Box::new(move |r: f64| s(r) * r.powi(nm1)),
        None => {
            let core = f.core;
            Box::new(move |r: f64| {
                let mut v = core(r);
                for (e, c) in &jet {
                    v -= c * r.powf(rat_to_f64(e));
                }
                v * r.powi(nm1)
            })
        }
    };
    let head = quad_adaptive(&*head_f, Interval::Finite(0.0, 1.0), tol / 3.0)?;

    let mut fp_terms = 0.0f64;
    for (e, c) in &f.jet {
        let shifted = e + rat_int(n as i64);
        if !shifted.is_zero() {
            fp_terms += c / rat_to_f64(&shifted);
        }
        // the finite part of -ln(eps) is zero: no contribution at e+n = 0
    }
    Ok(FloatApprox::real(
        tail.re + head.re + fp_terms,
        tail.abs_error_bound + head.abs_error_bound + fp_terms.abs() * 1e-14,
    ))
}

/// `F.p. int_{R^n} core(|x|) dx = C * F.p. int_0^infty core(r) r^{n-1} dr`.
pub fn fp_integral_ambient(f: &RadialIntegrand<'_>, tol: f64) -> Result<FloatApprox> {
    let radial = fp_radial_integral(f, tol)?;
    let c = surface_area(f.n).to_f64();
    Ok(FloatApprox::real(radial.re * c, radial.abs_error_bound * c))
}

/// Weighted-atom view of a distribution's single atom, for pole tables.
pub fn atoms_of_sl(d: &SlThickDistribution) -> &[(Weight, SlAtom)] {
    d.atoms()
}

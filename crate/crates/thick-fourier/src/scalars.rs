//! Exact arithmetic over the coefficient field `Q[i, pi^(1/2)]` tensored with
//! the degree-one transcendental slots `Q (+) Q·gamma (+) Q·ln2`, plus exact
//! gamma/digamma evaluation on the half-integer lattice and Laurent data of
//! gamma at its poles.
//!
//! A scalar is a finite sum of terms `i^k pi^p (a + b·gamma + c·ln2)` with
//! `k in {0,1}` after sign absorption, `p` a half-integer and `a,b,c`
//! rational. Addition is total; multiplication is defined only when at least
//! one factor has no gamma/ln2 part in any term, which keeps products inside
//! the field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::{rat, rat_int, Error, Rat, Result};

/// Coefficient triple of one term: `a + b·gamma + c·ln2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coeffs {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Coeffs {
    fn zero() -> Self {
        Coeffs { a: Rat::zero(), b: Rat::zero(), c: Rat::zero() }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    fn is_pure(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }
}

/// Term key: imaginary flag (the canonical power of `i` is 0 or 1, the sign
/// of `i^2 = -1` being absorbed into the coefficients) and twice the power
/// of pi, so `pi2 = 3` means `pi^(3/2)`.
pub type TermKey = (bool, i64);

/// Element of the exact coefficient field.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExactScalar {
    terms: BTreeMap<TermKey, Coeffs>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ExactScalar::from_rational(Rat::one())
    }

    pub fn from_rational(a: Rat) -> Self {
        let mut s = ExactScalar::zero();
        s.insert((false, 0), Coeffs { a, b: Rat::zero(), c: Rat::zero() });
        s
    }

    pub fn from_integer(v: i64) -> Self {
        ExactScalar::from_rational(rat_int(v))
    }

    /// `gamma` (Euler's constant) with rational coefficient `b`.
    pub fn gamma_times(b: Rat) -> Self {
        let mut s = ExactScalar::zero();
        s.insert((false, 0), Coeffs { a: Rat::zero(), b, c: Rat::zero() });
        s
    }

    /// `ln 2` with rational coefficient `c`.
    pub fn ln2_times(c: Rat) -> Self {
        let mut s = ExactScalar::zero();
        s.insert((false, 0), Coeffs { a: Rat::zero(), b: Rat::zero(), c });
        s
    }

    /// `pi^(pi2/2)`.
    pub fn pi_pow_half(pi2: i64) -> Self {
        let mut s = ExactScalar::zero();
        s.insert((false, pi2), Coeffs { a: Rat::one(), b: Rat::zero(), c: Rat::zero() });
        s
    }

    /// `i^k` reduced mod 4.
    pub fn i_pow(k: i64) -> Self {
        let k = k.rem_euclid(4);
        let (imag, sign) = match k {
            0 => (false, 1),
            1 => (true, 1),
            2 => (false, -1),
            _ => (true, -1),
        };
        let mut s = ExactScalar::zero();
        s.insert((imag, 0), Coeffs { a: rat_int(sign), b: Rat::zero(), c: Rat::zero() });
        s
    }

    /// `(2 pi)^n` as an exact scalar.
    pub fn two_pi_pow(n: u32) -> Self {
        let mut s = ExactScalar::pi_pow_half(2 * n as i64);
        s = s.mul_rational(&rat(1 << n, 1));
        s
    }

    fn insert(&mut self, key: TermKey, c: Coeffs) {
        if !c.is_zero() {
            let entry = self.terms.entry(key).or_insert_with(Coeffs::zero);
            entry.a += c.a;
            entry.b += c.b;
            entry.c += c.c;
            if entry.is_zero() {
                self.terms.remove(&key);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every term has zero gamma and ln2 slots.
    pub fn is_pure(&self) -> bool {
        self.terms.values().all(Coeffs::is_pure)
    }

    /// True when the scalar is a plain rational number.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&(false, 0)) {
                if c.is_pure() {
                    return Some(c.a.clone());
                }
            }
        }
        None
    }

    /// Single term `i^k pi^p q` with no gamma/ln2 content, if the scalar has
    /// that shape. Returns `(imag, pi2, q)`.
    pub fn as_monomial(&self) -> Option<(bool, i64, Rat)> {
        if self.terms.len() == 1 {
            let ((imag, pi2), c) = self.terms.iter().next().unwrap();
            if c.is_pure() {
                return Some((*imag, *pi2, c.a.clone()));
            }
        }
        None
    }

    pub fn add(&self, other: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExactScalar) -> ExactScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExactScalar {
        let mut out = ExactScalar::zero();
        for (k, c) in &self.terms {
            out.insert(*k, Coeffs { a: -c.a.clone(), b: -c.b.clone(), c: -c.c.clone() });
        }
        out
    }

    pub fn mul_rational(&self, r: &Rat) -> ExactScalar {
        if r.is_zero() {
            return ExactScalar::zero();
        }
        let mut out = ExactScalar::zero();
        for (k, c) in &self.terms {
            out.insert(*k, Coeffs { a: &c.a * r, b: &c.b * r, c: &c.c * r });
        }
        out
    }

    /// Product. Errors with [`Error::TranscendenceGuard`] unless at least one
    /// factor is pure (no gamma/ln2 slot anywhere), since products of two
    /// degree-one transcendental parts leave the field.
    pub fn mul(&self, other: &ExactScalar) -> Result<ExactScalar> {
        let (pure, mixed) = if self.is_pure() {
            (self, other)
        } else if other.is_pure() {
            (other, self)
        } else {
            return Err(Error::TranscendenceGuard);
        };
        let mut out = ExactScalar::zero();
        for ((im1, p1), c1) in &pure.terms {
            for ((im2, p2), c2) in &mixed.terms {
                // i^1 * i^1 = -1
                let sign = if *im1 && *im2 { -Rat::one() } else { Rat::one() };
                let factor = &c1.a * &sign;
                out.insert(
                    (*im1 ^ *im2, p1 + p2),
                    Coeffs { a: &c2.a * &factor, b: &c2.b * &factor, c: &c2.c * &factor },
                );
            }
        }
        Ok(out)
    }

    /// Exact division by a pure monomial `i^k pi^p q`, `q != 0`.
    pub fn div_monomial(&self, m: &ExactScalar) -> Result<ExactScalar> {
        let (imag, pi2, q) = m.as_monomial().ok_or(Error::TranscendenceGuard)?;
        if q.is_zero() {
            return Err(Error::TranscendenceGuard);
        }
        // 1/(i q pi^p) = -i q^{-1} pi^{-p}
        let mut inv = ExactScalar::zero();
        let coeff = if imag { -q.recip() } else { q.recip() };
        inv.insert((imag, -pi2), Coeffs { a: coeff, b: Rat::zero(), c: Rat::zero() });
        self.mul(&inv)
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Coeffs> {
        &self.terms
    }

    pub fn from_terms(terms: BTreeMap<TermKey, Coeffs>) -> Self {
        let mut out = ExactScalar::zero();
        for (k, c) in terms {
            out.insert(k, c);
        }
        out
    }

    /// Numeric evaluation with a conservative absolute error bound.
    ///
    /// `precision` caps the reported bound from below at `10^-precision`;
    /// the computation itself runs in f64.
    pub fn to_float(&self, precision: u32) -> FloatApprox {
        const GAMMA: f64 = 0.577_215_664_901_532_9;
        const LN2: f64 = std::f64::consts::LN_2;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut bound = 0.0f64;
        for ((imag, pi2), c) in &self.terms {
            let p = *pi2 as f64 / 2.0;
            let pi_pow = std::f64::consts::PI.powf(p);
            let val = rat_to_f64(&c.a) + rat_to_f64(&c.b) * GAMMA + rat_to_f64(&c.c) * LN2;
            let term = pi_pow * val;
            if *imag {
                im += term;
            } else {
                re += term;
            }
            bound += term.abs() * 1e-14 + 1e-300;
        }
        let floor = 10f64.powi(-(precision.min(300) as i32));
        FloatApprox { re, im, abs_error_bound: bound.max(f64::EPSILON).min(floor.max(bound)) }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(15).re
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((imag, pi2), c) in &self.terms {
            for (r, unit) in [(&c.a, ""), (&c.b, "*gamma"), (&c.c, "*ln2")] {
                if r.is_zero() {
                    continue;
                }
                if !first {
                    f.write_str(if r.is_negative() { " - " } else { " + " })?;
                } else if r.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
                let abs = r.abs();
                write!(f, "{}", rat_display(&abs))?;
                if *imag {
                    f.write_str("*i")?;
                }
                match pi2 {
                    0 => {}
                    2 => f.write_str("*pi")?,
                    p if p % 2 == 0 => write!(f, "*pi^{}", p / 2)?,
                    p => write!(f, "*pi^({p}/2)")?,
                }
                f.write_str(unit)?;
            }
        }
        Ok(())
    }
}

fn rat_display(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through a quotient of truncated bigints
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Numeric value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatApprox {
    pub re: f64,
    pub im: f64,
    pub abs_error_bound: f64,
}

impl FloatApprox {
    pub fn real(v: f64, bound: f64) -> Self {
        FloatApprox { re: v, im: 0.0, abs_error_bound: bound }
    }
}

/// Half-integer argument `x = num2/2`. Positive half-integer lattice check.
fn as_half_integer(x: &Rat) -> Option<i64> {
    let two = rat_int(2);
    let doubled = x * &two;
    if doubled.denom().is_one() {
        doubled.numer().to_i64()
    } else {
        None
    }
}

/// Exact gamma on the half-integer lattice, excluding the poles at
/// non-positive integers. Internal workhorse; covers negative half-odd
/// arguments like `gamma(-1/2) = -2 sqrt(pi)`.
pub fn gamma_half(x: &Rat) -> Result<ExactScalar> {
    let num2 = as_half_integer(x).ok_or(Error::NonPositiveOrNonHalfInteger)?;
    if num2 % 2 == 0 {
        let m = num2 / 2;
        if m <= 0 {
            return Err(Error::GammaPole);
        }
        // gamma(m) = (m-1)!
        let mut acc = BigInt::one();
        for j in 2..m {
            acc *= BigInt::from(j);
        }
        Ok(ExactScalar::from_rational(Rat::from_integer(acc)))
    } else {
        // gamma(k + 1/2) via the recurrence from gamma(1/2) = sqrt(pi),
        // valid in both directions since no pole sits on this lattice.
        let mut factor = Rat::one();
        let mut num2_cur = num2;
        while num2_cur > 1 {
            // gamma(x) = (x-1) gamma(x-1)
            num2_cur -= 2;
            factor *= Rat::new(BigInt::from(num2_cur), BigInt::from(2));
        }
        while num2_cur < 1 {
            // gamma(x) = gamma(x+1)/x
            factor /= Rat::new(BigInt::from(num2_cur), BigInt::from(2));
            num2_cur += 2;
        }
        Ok(ExactScalar::pi_pow_half(1).mul_rational(&factor))
    }
}

/// `gamma(x)` for positive `x` on the half-integer lattice.
pub fn gamma_exact(x: &Rat) -> Result<ExactScalar> {
    if !x.is_positive() {
        return Err(Error::NonPositiveOrNonHalfInteger);
    }
    gamma_half(x)
}

/// Harmonic number `H_m = sum_{j=1}^m 1/j`.
fn harmonic(m: i64) -> Rat {
    let mut h = Rat::zero();
    for j in 1..=m {
        h += rat(1, j);
    }
    h
}

/// Exact digamma on the half-integer lattice away from non-positive integers:
/// `psi(m) = H_{m-1} - gamma` and
/// `psi(m + 1/2) = -gamma - 2 ln2 + 2 sum_{j=1}^m 1/(2j-1)`,
/// extended to negative half-odd arguments by `psi(x) = psi(x+1) - 1/x`.
pub fn digamma_half(x: &Rat) -> Result<ExactScalar> {
    let num2 = as_half_integer(x).ok_or(Error::NonPositiveOrNonHalfInteger)?;
    if num2 % 2 == 0 {
        let m = num2 / 2;
        if m <= 0 {
            return Err(Error::GammaPole);
        }
        Ok(ExactScalar::from_rational(harmonic(m - 1)).add(&ExactScalar::gamma_times(-Rat::one())))
    } else if num2 > 0 {
        let m = (num2 - 1) / 2;
        let mut odd_sum = Rat::zero();
        for j in 1..=m {
            odd_sum += rat(2, 2 * j - 1);
        }
        Ok(ExactScalar::from_rational(odd_sum)
            .add(&ExactScalar::gamma_times(-Rat::one()))
            .add(&ExactScalar::ln2_times(rat_int(-2))))
    } else {
        // descend: psi(x) = psi(x+1) - 1/x
        let mut correction = Rat::zero();
        let mut num2_cur = num2;
        while num2_cur < 1 {
            correction -= Rat::new(BigInt::from(2), BigInt::from(num2_cur));
            num2_cur += 2;
        }
        let base = digamma_half(&Rat::new(BigInt::from(num2_cur), BigInt::from(2)))?;
        Ok(base.add(&ExactScalar::from_rational(correction)))
    }
}

/// `psi(x)` for positive `x` on the half-integer lattice.
pub fn digamma_exact(x: &Rat) -> Result<ExactScalar> {
    if !x.is_positive() {
        return Err(Error::NonPositiveOrNonHalfInteger);
    }
    digamma_half(x)
}

/// Laurent data of gamma at `lambda = -k`:
/// residue `(-1)^k / k!` and finite term `(-1)^k psi(k+1) / k!`.
pub fn gamma_laurent(k: u32) -> (ExactScalar, ExactScalar) {
    let mut fact = Rat::one();
    for j in 2..=k as i64 {
        fact *= rat_int(j);
    }
    let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
    let residue = &sign / &fact;
    let psi = ExactScalar::from_rational(harmonic(k as i64)).add(&ExactScalar::gamma_times(-Rat::one()));
    let finite = psi.mul_rational(&(&sign / &fact));
    (ExactScalar::from_rational(residue), finite)
}

/// `c_{m,n} = 2 gamma(m + 1/2) pi^{(n-1)/2} / gamma(m + n/2)`, the sphere
/// integral of `w_j^{2m}`.
pub fn c_const(m: u32, n: u32) -> ExactScalar {
    assert!(n >= 2, "dimension must be at least 2");
    let g1 = gamma_half(&rat(2 * m as i64 + 1, 2)).expect("positive half-odd");
    let g2 = gamma_half(&rat(2 * m as i64 + n as i64, 2)).expect("positive");
    let num = g1
        .mul(&ExactScalar::pi_pow_half(n as i64 - 1))
        .expect("pure")
        .mul_rational(&rat_int(2));
    num.div_monomial(&g2).expect("gamma values are monomials")
}

/// Surface area `C = c_{0,n}` of the unit sphere in `R^n`.
pub fn surface_area(n: u32) -> ExactScalar {
    c_const(0, n)
}

/// Unevaluated factor `2^{two_exp} * prod gamma(num_j) / prod gamma(den_j)`.
///
/// Kernel coefficients at non-integer parameters involve gamma values and
/// powers of two outside the exact field; carrying them unevaluated lets the
/// inverse transform cancel them exactly (the round-trip products always
/// collapse to pure scalars).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct GammaFactor {
    pub two_exp: Rat,
    pub num: Vec<Rat>,
    pub den: Vec<Rat>,
}

impl GammaFactor {
    pub fn trivial() -> Self {
        GammaFactor { two_exp: Rat::zero(), num: Vec::new(), den: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.num.is_empty() && self.den.is_empty() && self.two_exp.is_zero()
    }

    pub fn new(two_exp: Rat, num: Vec<Rat>, den: Vec<Rat>) -> Self {
        let mut f = GammaFactor { two_exp, num, den };
        f.cancel();
        f
    }

    fn cancel(&mut self) {
        self.num.sort();
        self.den.sort();
        let mut i = 0;
        while i < self.num.len() {
            if let Some(j) = self.den.iter().position(|d| *d == self.num[i]) {
                self.num.remove(i);
                self.den.remove(j);
            } else {
                i += 1;
            }
        }
    }

    pub fn mul(&self, other: &GammaFactor) -> GammaFactor {
        let mut out = GammaFactor {
            two_exp: &self.two_exp + &other.two_exp,
            num: self.num.iter().chain(other.num.iter()).cloned().collect(),
            den: self.den.iter().chain(other.den.iter()).cloned().collect(),
        };
        out.cancel();
        out
    }

    /// When every gamma argument sits on the half-integer lattice and the
    /// power of two is an integer, the factor folds into an exact scalar.
    pub fn fold_exact(&self) -> Option<ExactScalar> {
        if !self.two_exp.denom().is_one() {
            return None;
        }
        let e = self.two_exp.numer().to_i64()?;
        let mut acc = ExactScalar::from_rational(Rat::from_integer(if e >= 0 {
            BigInt::from(2).pow(e as u32)
        } else {
            BigInt::one()
        }));
        if e < 0 {
            acc = acc.mul_rational(&Rat::new(BigInt::one(), BigInt::from(2).pow((-e) as u32)));
        }
        for g in &self.num {
            acc = acc.mul(&gamma_half(g).ok()?).ok()?;
        }
        for g in &self.den {
            acc = acc.div_monomial(&gamma_half(g).ok()?).ok()?;
        }
        Some(acc)
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = 2f64.powf(rat_to_f64(&self.two_exp));
        for g in &self.num {
            v *= statrs::function::gamma::gamma(rat_to_f64(g));
        }
        for g in &self.den {
            v /= statrs::function::gamma::gamma(rat_to_f64(g));
        }
        v
    }
}

/// Atom weight: exact scalar times an optional unevaluated gamma-ratio factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight {
    pub exact: ExactScalar,
    pub gamma: GammaFactor,
}

impl fmt::Display for GammaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.two_exp.is_zero() {
            write!(f, "2^({})", rat_display(&self.two_exp))?;
        }
        for g in &self.num {
            write!(f, "*G({})", rat_display(g))?;
        }
        for g in &self.den {
            write!(f, "/G({})", rat_display(g))?;
        }
        Ok(())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gamma.is_trivial() {
            write!(f, "{}", self.exact)
        } else {
            write!(f, "({})*{}", self.exact, self.gamma)
        }
    }
}

impl Weight {
    pub fn one() -> Self {
        Weight { exact: ExactScalar::one(), gamma: GammaFactor::trivial() }
    }

    pub fn from_exact(e: ExactScalar) -> Self {
        Weight { exact: e, gamma: GammaFactor::trivial() }
    }

    pub fn is_zero(&self) -> bool {
        self.exact.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.gamma.is_trivial()
    }

    /// Collapse the gamma factor when it lies on the half-integer lattice.
    pub fn normalized(mut self) -> Self {
        if !self.gamma.is_trivial() {
            if let Some(folded) = self.gamma.fold_exact() {
                if let Ok(e) = self.exact.mul(&folded) {
                    self.exact = e;
                    self.gamma = GammaFactor::trivial();
                }
            }
        }
        self
    }

    pub fn mul(&self, other: &Weight) -> Result<Weight> {
        Ok(Weight {
            exact: self.exact.mul(&other.exact)?,
            gamma: self.gamma.mul(&other.gamma),
        }
        .normalized())
    }

    pub fn mul_exact(&self, e: &ExactScalar) -> Result<Weight> {
        Ok(Weight { exact: self.exact.mul(e)?, gamma: self.gamma.clone() })
    }

    pub fn to_float(&self, precision: u32) -> FloatApprox {
        let base = self.exact.to_float(precision);
        if self.gamma.is_trivial() {
            base
        } else {
            let f = self.gamma.to_f64();
            FloatApprox {
                re: base.re * f,
                im: base.im * f,
                abs_error_bound: (base.abs_error_bound * f.abs()).max(f.abs() * 1e-13),
            }
        }
    }
}

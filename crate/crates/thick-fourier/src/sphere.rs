//! Harmonic-polynomial algebra in `n` variables: exact sphere integrals of
//! monomials, decomposition of homogeneous polynomials into spherical
//! harmonics via the `r^2`-ladder, zonal (reproducing) kernels, polynomial
//! parts, and membership tests for the spaces `D_q`.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::scalars::{gamma_half, surface_area, ExactScalar};
use crate::{rat, rat_int, Error, Rat, Result};

/// Multivariate polynomial with exact scalar coefficients, keyed by exponent
/// multi-indices of fixed length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    pub n: u32,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl MultiPoly {
    pub fn zero(n: u32) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: u32, c: ExactScalar) -> Self {
        let mut p = MultiPoly::zero(n);
        p.add_term(vec![0; n as usize], c);
        p
    }

    /// The coordinate monomial `x_j`.
    pub fn coordinate(n: u32, j: usize) -> Self {
        assert!(j < n as usize);
        let mut alpha = vec![0; n as usize];
        alpha[j] = 1;
        let mut p = MultiPoly::zero(n);
        p.add_term(alpha, ExactScalar::one());
        p
    }

    /// `|x|^2 = x_1^2 + ... + x_n^2`.
    pub fn r_squared(n: u32) -> Self {
        let mut p = MultiPoly::zero(n);
        for j in 0..n as usize {
            let mut alpha = vec![0; n as usize];
            alpha[j] = 2;
            p.add_term(alpha, ExactScalar::one());
        }
        p
    }

    pub fn add_term(&mut self, alpha: Vec<u32>, c: ExactScalar) {
        assert_eq!(alpha.len(), self.n as usize);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha.clone()).or_insert_with(ExactScalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&ExactScalar::from_integer(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v.mul(c).expect("scalar scale"));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rat) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v.mul_rational(r));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n);
        let mut out = MultiPoly::zero(self.n);
        for (a1, c1) in &self.terms {
            for (a2, c2) in &other.terms {
                let alpha: Vec<u32> = a1.iter().zip(a2).map(|(x, y)| x + y).collect();
                out.add_term(alpha, c1.mul(c2).expect("poly coefficients are pure"));
            }
        }
        out
    }

    /// Total degree when homogeneous, error otherwise. The zero polynomial
    /// is homogeneous of every degree; returns `None` for it.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for alpha in self.terms.keys() {
            let d: u32 = alpha.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn partial(&self, j: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (alpha, c) in &self.terms {
            if alpha[j] == 0 {
                continue;
            }
            let mut a = alpha.clone();
            a[j] -= 1;
            out.add_term(a, c.mul_rational(&rat_int(alpha[j] as i64)));
        }
        out
    }

    pub fn laplacian(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for j in 0..self.n as usize {
            out = out.add(&self.partial(j).partial(j));
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (alpha, c) in &self.terms {
            let mut m = c.to_f64();
            for (j, &e) in alpha.iter().enumerate() {
                m *= x[j].powi(e as i32);
            }
            acc += m;
        }
        acc
    }

    /// Substitute `x -> -x`: multiplies each degree-`d` monomial by `(-1)^d`.
    pub fn reflect(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (alpha, c) in &self.terms {
            let d: u32 = alpha.iter().sum();
            let c = if d % 2 == 1 { c.neg() } else { c.clone() };
            out.add_term(alpha.clone(), c);
        }
        out
    }
}

/// Exact integral of the monomial `w^alpha` over the unit sphere with
/// unnormalized surface measure: zero when any exponent is odd, otherwise
/// `2 gamma(b_1) ... gamma(b_n) / gamma(b_1 + ... + b_n)` with
/// `b_i = (alpha_i + 1)/2`.
pub fn sphere_monomial_integral(alpha: &[u32]) -> ExactScalar {
    if alpha.iter().any(|e| e % 2 == 1) {
        return ExactScalar::zero();
    }
    let mut num = ExactScalar::from_integer(2);
    let mut sum = Rat::zero();
    for &e in alpha {
        let b = rat(e as i64 + 1, 2);
        sum += &b;
        num = num.mul(&gamma_half(&b).expect("positive half-integer")).expect("pure");
    }
    num.div_monomial(&gamma_half(&sum).expect("positive")).expect("gamma monomial")
}

/// Exact integral of a polynomial representative over the unit sphere.
pub fn sphere_integral(p: &MultiPoly) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (alpha, c) in p.terms() {
        let i = sphere_monomial_integral(alpha);
        if !i.is_zero() {
            acc = acc.add(&c.mul(&i).expect("pure"));
        }
    }
    acc
}

/// Exact sphere inner product of two polynomial representatives.
pub fn sphere_inner(p: &MultiPoly, q: &MultiPoly) -> ExactScalar {
    sphere_integral(&p.mul(q))
}

/// Harmonic homogeneous polynomial of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicPoly {
    pub degree: u32,
    pub poly: MultiPoly,
}

impl HarmonicPoly {
    /// Wraps a polynomial after checking homogeneity and harmonicity.
    pub fn new(poly: MultiPoly) -> Result<Self> {
        let degree = poly.homogeneous_degree()?.unwrap_or(0);
        if !poly.laplacian().is_zero() {
            return Err(Error::NotHomogeneous);
        }
        Ok(HarmonicPoly { degree, poly })
    }

    pub fn n(&self) -> u32 {
        self.poly.n
    }
}

/// Finite sum of spherical harmonics `sum_m Y_m(w)` on the unit sphere,
/// stored as harmonic polynomial representatives keyed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AngularFunction {
    pub n: u32,
    components: BTreeMap<u32, HarmonicPoly>,
}

impl AngularFunction {
    pub fn zero(n: u32) -> Self {
        AngularFunction { n, components: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        AngularFunction::constant(n, ExactScalar::one())
    }

    pub fn constant(n: u32, c: ExactScalar) -> Self {
        let mut a = AngularFunction::zero(n);
        if !c.is_zero() {
            a.components
                .insert(0, HarmonicPoly { degree: 0, poly: MultiPoly::constant(n, c) });
        }
        a
    }

    /// Restriction of an arbitrary polynomial to the sphere: decompose each
    /// homogeneous part by the harmonic ladder and drop the `r^{2k}` factors
    /// (which are 1 on the sphere).
    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        let mut out = AngularFunction::zero(p.n);
        let mut parts: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (alpha, c) in p.terms() {
            let d: u32 = alpha.iter().sum();
            parts
                .entry(d)
                .or_insert_with(|| MultiPoly::zero(p.n))
                .add_term(alpha.clone(), c.clone());
        }
        for (_, part) in parts {
            for h in harmonic_decompose(&part)? {
                out.add_component(h);
            }
        }
        Ok(out)
    }

    pub fn from_harmonic(h: HarmonicPoly) -> Self {
        let mut a = AngularFunction::zero(h.n());
        a.add_component(h);
        a
    }

    pub fn add_component(&mut self, h: HarmonicPoly) {
        if h.poly.is_zero() {
            return;
        }
        match self.components.remove(&h.degree) {
            None => {
                self.components.insert(h.degree, h);
            }
            Some(existing) => {
                let sum = existing.poly.add(&h.poly);
                if !sum.is_zero() {
                    self.components
                        .insert(h.degree, HarmonicPoly { degree: h.degree, poly: sum });
                }
            }
        }
    }

    pub fn components(&self) -> &BTreeMap<u32, HarmonicPoly> {
        &self.components
    }

    pub fn component(&self, degree: u32) -> Option<&HarmonicPoly> {
        self.components.get(&degree)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &AngularFunction) -> AngularFunction {
        let mut out = self.clone();
        for h in other.components.values() {
            out.add_component(h.clone());
        }
        out
    }

    pub fn sub(&self, other: &AngularFunction) -> AngularFunction {
        self.add(&other.scale(&ExactScalar::from_integer(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> AngularFunction {
        let mut out = AngularFunction::zero(self.n);
        for h in self.components.values() {
            out.add_component(HarmonicPoly { degree: h.degree, poly: h.poly.scale(c) });
        }
        out
    }

    pub fn scale_rational(&self, r: &Rat) -> AngularFunction {
        self.scale(&ExactScalar::from_rational(r.clone()))
    }

    /// `a(-w)`: flips the sign of odd-degree components.
    pub fn reflect(&self) -> AngularFunction {
        let mut out = AngularFunction::zero(self.n);
        for h in self.components.values() {
            out.add_component(HarmonicPoly { degree: h.degree, poly: h.poly.reflect() });
        }
        out
    }

    /// Exact sphere inner product `<a, b> = int_S a b dsigma`. Cross-degree
    /// terms vanish by orthogonality, so this sums per-degree inner products.
    pub fn inner(&self, other: &AngularFunction) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (d, h) in &self.components {
            if let Some(g) = other.components.get(d) {
                acc = acc.add(&sphere_inner(&h.poly, &g.poly));
            }
        }
        acc
    }

    /// Sum of all component representatives as one polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for h in self.components.values() {
            p = p.add(&h.poly);
        }
        p
    }

    pub fn eval_f64(&self, w: &[f64]) -> f64 {
        self.to_poly().eval_f64(w)
    }
}

/// Restriction of a homogeneous polynomial of degree `q` to the sphere;
/// the spaces `P_q = H_q (+) H_{q-2} (+) ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpherePoly {
    pub n: u32,
    pub q: u32,
    pub poly: MultiPoly,
}

impl SpherePoly {
    pub fn new(q: u32, poly: MultiPoly) -> Result<Self> {
        match poly.homogeneous_degree()? {
            Some(d) if d != q => Err(Error::NotHomogeneous),
            _ => Ok(SpherePoly { n: poly.n, q, poly }),
        }
    }

    pub fn zero(n: u32, q: u32) -> Self {
        SpherePoly { n, q, poly: MultiPoly::zero(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Sphere restriction as an angular function.
    pub fn to_angular(&self) -> AngularFunction {
        AngularFunction::from_poly(&self.poly).expect("homogeneous input")
    }
}

/// Decomposes a homogeneous polynomial as `p = sum_k |x|^{2k} h_{q-2k}` with
/// each `h` harmonic; returns `[h_q, h_{q-2}, ...]`. Uses the Laplacian
/// ladder `Delta(r^{2k} h_d) = 2k(2k + 2d + n - 2) r^{2k-2} h_d` to solve
/// bottom-up, all arithmetic exact.
pub fn harmonic_decompose(p: &MultiPoly) -> Result<Vec<HarmonicPoly>> {
    let q = match p.homogeneous_degree()? {
        None => return Ok(Vec::new()),
        Some(q) => q,
    };
    let n = p.n;
    let kmax = (q / 2) as usize;
    let mut harmonics: Vec<MultiPoly> = vec![MultiPoly::zero(n); kmax + 1];
    let mut lap_p: Vec<MultiPoly> = Vec::with_capacity(kmax + 1);
    lap_p.push(p.clone());
    for j in 1..=kmax {
        let next = lap_p[j - 1].laplacian();
        lap_p.push(next);
    }
    // ladder factor: Delta^j (r^{2k} h_d) = c(j,k,d) r^{2(k-j)} h_d, j <= k
    let ladder = |j: usize, k: usize, d: u32| -> Rat {
        let mut f = Rat::one();
        for i in 0..j {
            let twok = 2 * (k - i) as i64;
            f *= rat_int(twok * (twok + 2 * d as i64 + n as i64 - 2));
        }
        f
    };
    // solve bottom-up: Delta^j p = sum_{k>=j} c(j,k,d_k) r^{2(k-j)} h_k
    for j in (0..=kmax).rev() {
        let mut rhs = lap_p[j].clone();
        let r2 = MultiPoly::r_squared(n);
        for k in (j + 1)..=kmax {
            let d = q - 2 * k as u32;
            let mut term = harmonics[k].clone();
            for _ in 0..(k - j) {
                term = term.mul(&r2);
            }
            rhs = rhs.sub(&term.scale_rational(&ladder(j, k, d)));
        }
        let d = q - 2 * j as u32;
        let denom = ladder(j, j, d);
        harmonics[j] = rhs.scale_rational(&denom.recip());
    }
    let mut out = Vec::with_capacity(kmax + 1);
    for (k, h) in harmonics.into_iter().enumerate() {
        debug_assert!(h.laplacian().is_zero(), "ladder produced non-harmonic part");
        if !h.is_zero() {
            out.push(HarmonicPoly { degree: q - 2 * k as u32, poly: h });
        }
    }
    Ok(out)
}

/// Zonal (reproducing) kernel `Z_m` of `H_m` as a univariate polynomial in
/// `t = w·v`, with the normalization contract
/// `(1/C) int_S Z_m(w·v) Y_m(w) dsigma(w) = Y_m(v)` for unnormalized sigma.
///
/// `Z_0 = 1` by fiat: the usual prefactor `n + 2m - 2` gives `n - 2` at
/// `m = 0`, which breaks the reproducing property, so the constant projector
/// is pinned directly.
pub fn zonal_kernel(m: u32, n: u32) -> Vec<(u32, Rat)> {
    if m == 0 {
        return vec![(0, Rat::one())];
    }
    let mut coeffs = Vec::new();
    let prefactor = rat_int(n as i64 + 2 * m as i64 - 2);
    for q in 0..=(m / 2) {
        // n (n+2) ... (n + 2m - 2q - 4), empty product = 1
        let mut prod = Rat::one();
        let mut f = n as i64;
        while f <= n as i64 + 2 * (m as i64) - 2 * (q as i64) - 4 {
            prod *= rat_int(f);
            f += 2;
        }
        let mut denom = Rat::one();
        for i in 1..=q as i64 {
            denom *= rat_int(2 * i);
        }
        for i in 1..=(m - 2 * q) as i64 {
            denom *= rat_int(i);
        }
        let sign = if q % 2 == 0 { Rat::one() } else { -Rat::one() };
        coeffs.push((m - 2 * q, &prefactor * sign * prod / denom));
    }
    coeffs
}

/// Projects the angular function onto degree `m` by the zonal kernel:
/// `Y_m{a}(v) = (1/C) int_S Z_m(w·v) a(w) dsigma(w)`, evaluated exactly and
/// restricted back to the sphere. The kernel route exists as an independent
/// cross-check of [`harmonic_decompose`]; both must agree on polynomial
/// inputs.
pub fn zonal_project(a: &AngularFunction, m: u32) -> AngularFunction {
    let n = a.n;
    let a_poly = a.to_poly();
    let mut out = MultiPoly::zero(n);
    for (power, coeff) in zonal_kernel(m, n) {
        // expand (w·v)^power by multinomials and integrate in w exactly
        let mut multi: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        multi.insert(vec![0u32; n as usize], Rat::one());
        for _ in 0..power {
            let mut next: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
            for (alpha, c) in &multi {
                for j in 0..n as usize {
                    let mut a2 = alpha.clone();
                    a2[j] += 1;
                    *next.entry(a2).or_insert_with(Rat::zero) += c;
                }
            }
            multi = next;
        }
        for (alpha, mult) in multi {
            let mut shifted = MultiPoly::zero(n);
            shifted.add_term(alpha.clone(), ExactScalar::one());
            let integral = sphere_inner(&shifted, &a_poly);
            if integral.is_zero() {
                continue;
            }
            out.add_term(alpha, integral.mul_rational(&(&coeff * &mult)));
        }
    }
    let c = surface_area(n);
    let scaled = out.scale(&ExactScalar::one().div_monomial(&c).expect("surface area monomial"));
    AngularFunction::from_poly(&scaled).expect("projection output is polynomial")
}

/// Excluded harmonic degrees of the space `D_q`: empty for `1-n <= q <= -1`,
/// `{q, q-2, ...}` for `q >= 0`, and the set of `D_{-n-q}` for `q <= -n`.
pub fn excluded_degrees(q: i64, n: u32) -> Vec<u32> {
    let q_eff = if q >= 0 {
        q
    } else if q <= -(n as i64) {
        -(n as i64) - q
    } else {
        return Vec::new();
    };
    let mut d = q_eff;
    let mut out = Vec::new();
    while d >= 0 {
        out.push(d as u32);
        d -= 2;
    }
    out
}

/// True iff every harmonic component of `a` in the excluded degree set of
/// `D_q` vanishes.
pub fn in_dq(a: &AngularFunction, q: i64, n: u32) -> bool {
    let excluded = excluded_degrees(q, n);
    a.components().keys().all(|d| !excluded.contains(d))
}

/// Splits `A` at order `q` into its polynomial part `E_q` (harmonic degrees
/// `q, q-2, ...` lifted to a homogeneous polynomial of degree `q`) and the
/// remainder, with `A = kept + remainder` on the sphere.
pub fn polynomial_part(a: &AngularFunction, q: u32) -> (SpherePoly, AngularFunction) {
    let n = a.n;
    let r2 = MultiPoly::r_squared(n);
    let mut poly = MultiPoly::zero(n);
    let mut remainder = AngularFunction::zero(n);
    for (d, h) in a.components() {
        if *d <= q && (q - *d) % 2 == 0 {
            let mut lifted = h.poly.clone();
            for _ in 0..((q - *d) / 2) {
                lifted = lifted.mul(&r2);
            }
            poly = poly.add(&lifted);
        } else {
            remainder.add_component(h.clone());
        }
    }
    (SpherePoly { n, q, poly }, remainder)
}

/// Dimension of the space of spherical harmonics of degree `m` in `R^n`:
/// `binom(n+m-1, m) - binom(n+m-3, m-2)`.
pub fn harmonic_dim(m: u32, n: u32) -> Rat {
    fn binom(top: i64, k: i64) -> Rat {
        if k < 0 || top < 0 || k > top {
            return Rat::zero();
        }
        let mut v = Rat::one();
        for i in 0..k {
            v *= rat(top - i, i + 1);
        }
        v
    }
    binom(n as i64 + m as i64 - 1, m as i64) - binom(n as i64 + m as i64 - 3, m as i64 - 2)
}

//! Atom algebra for distributions thick at the origin and sl-thick
//! distributions on the one-point compactification: formal sums of catalog
//! atoms, pairings against truncated jets, scalar changes of variables,
//! coordinate multiplication, derivatives of finite-part powers, delta
//! parts, and the radial-homogeneous classification.
//!
//! Every distribution is a finite formal sum of catalog atoms; operations
//! are rewrites on atoms with explicit `Unsupported*` errors where the
//! calculus provides no rule.

use std::collections::BTreeMap;

use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::finitepart::{fp_radial_integral, RadialIntegrand};
use crate::scalars::{
    c_const, gamma_half, rat_to_f64, surface_area, ExactScalar, FloatApprox, Weight,
};
use crate::sphere::{
    excluded_degrees, in_dq, AngularFunction, MultiPoly, SpherePoly,
};
use crate::{rat, rat_int, Error, Rat, Result};

/// Atom kinds for distributions thick at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThickAtom {
    /// `Pf(r^lambda a(w))`.
    Pf { lambda: Rat, density: AngularFunction },
    /// `g(w) delta_*^[q]`, the thick delta of order `q` with density `g`.
    Delta { order: i64, density: AngularFunction },
    /// `Y(grad) lap^q delta` for a harmonic `Y` of degree `k`.
    DerivDelta { k: u32, q: u32, poly: MultiPoly },
}

/// Atom kinds for sl-thick distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlAtom {
    /// `PfW(s^lambda A(v))`, finite part at zero and infinity.
    PfW { lambda: Rat, density: AngularFunction },
    /// `G(v) delta_inf^[q]`, reading the `s^q` coefficient at infinity.
    DeltaInf { order: i64, density: AngularFunction },
    /// `H(v) delta_{ln,inf}^[q]`, reading the `s^q ln s` coefficient.
    DeltaLnInf { order: i64, density: SpherePoly },
    /// `Y(grad) lap^q delta(u)` at the origin of the compactified space.
    DerivDeltaOrigin { k: u32, q: u32, poly: MultiPoly },
}

impl std::fmt::Display for ThickAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThickAtom::Pf { lambda, .. } => write!(f, "Pf(r^{lambda})"),
            ThickAtom::Delta { order, .. } => write!(f, "delta_*^[{order}]"),
            ThickAtom::DerivDelta { k, q, .. } => write!(f, "Y_{k}(grad)grad^{}delta", 2 * q),
        }
    }
}

impl std::fmt::Display for SlAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SlAtom::PfW { lambda, .. } => write!(f, "PfW(s^{lambda})"),
            SlAtom::DeltaInf { order, .. } => write!(f, "delta_inf^[{order}]"),
            SlAtom::DeltaLnInf { order, .. } => write!(f, "delta_ln_inf^[{order}]"),
            SlAtom::DerivDeltaOrigin { k, q, .. } => {
                write!(f, "Y_{k}(grad)grad^{}delta(u)", 2 * q)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// shared canonical-sum plumbing

fn scale_thick_atom(atom: &ThickAtom, c: &ExactScalar) -> ThickAtom {
    match atom {
        ThickAtom::Pf { lambda, density } => {
            ThickAtom::Pf { lambda: lambda.clone(), density: density.scale(c) }
        }
        ThickAtom::Delta { order, density } => {
            ThickAtom::Delta { order: *order, density: density.scale(c) }
        }
        ThickAtom::DerivDelta { k, q, poly } => {
            ThickAtom::DerivDelta { k: *k, q: *q, poly: poly.scale(c) }
        }
    }
}

fn scale_sl_atom(atom: &SlAtom, c: &ExactScalar) -> SlAtom {
    match atom {
        SlAtom::PfW { lambda, density } => {
            SlAtom::PfW { lambda: lambda.clone(), density: density.scale(c) }
        }
        SlAtom::DeltaInf { order, density } => {
            SlAtom::DeltaInf { order: *order, density: density.scale(c) }
        }
        SlAtom::DeltaLnInf { order, density } => SlAtom::DeltaLnInf {
            order: *order,
            density: SpherePoly { n: density.n, q: density.q, poly: density.poly.scale(c) },
        },
        SlAtom::DerivDeltaOrigin { k, q, poly } => {
            SlAtom::DerivDeltaOrigin { k: *k, q: *q, poly: poly.scale(c) }
        }
    }
}

fn thick_atom_is_zero(atom: &ThickAtom) -> bool {
    match atom {
        ThickAtom::Pf { density, .. } | ThickAtom::Delta { density, .. } => density.is_zero(),
        ThickAtom::DerivDelta { poly, .. } => poly.is_zero(),
    }
}

fn sl_atom_is_zero(atom: &SlAtom) -> bool {
    match atom {
        SlAtom::PfW { density, .. } | SlAtom::DeltaInf { density, .. } => density.is_zero(),
        SlAtom::DeltaLnInf { density, .. } => density.is_zero(),
        SlAtom::DerivDeltaOrigin { poly, .. } => poly.is_zero(),
    }
}

type AtomKey = (u8, Rat, i64, u32, u32, crate::scalars::GammaFactor);

fn thick_key(w: &Weight, atom: &ThickAtom) -> AtomKey {
    match atom {
        ThickAtom::Pf { lambda, .. } => (0, lambda.clone(), 0, 0, 0, w.gamma.clone()),
        ThickAtom::Delta { order, .. } => (1, Rat::zero(), *order, 0, 0, w.gamma.clone()),
        ThickAtom::DerivDelta { k, q, .. } => (2, Rat::zero(), 0, *k, *q, w.gamma.clone()),
    }
}

fn sl_key(w: &Weight, atom: &SlAtom) -> AtomKey {
    match atom {
        SlAtom::PfW { lambda, .. } => (0, lambda.clone(), 0, 0, 0, w.gamma.clone()),
        SlAtom::DeltaInf { order, .. } => (1, Rat::zero(), *order, 0, 0, w.gamma.clone()),
        SlAtom::DeltaLnInf { order, .. } => (2, Rat::zero(), *order, 0, 0, w.gamma.clone()),
        SlAtom::DerivDeltaOrigin { k, q, .. } => (3, Rat::zero(), 0, *k, *q, w.gamma.clone()),
    }
}

fn merge_thick(a: &ThickAtom, b: &ThickAtom) -> ThickAtom {
    match (a, b) {
        (ThickAtom::Pf { lambda, density: d1 }, ThickAtom::Pf { density: d2, .. }) => {
            ThickAtom::Pf { lambda: lambda.clone(), density: d1.add(d2) }
        }
        (ThickAtom::Delta { order, density: d1 }, ThickAtom::Delta { density: d2, .. }) => {
            ThickAtom::Delta { order: *order, density: d1.add(d2) }
        }
        (ThickAtom::DerivDelta { k, q, poly: p1 }, ThickAtom::DerivDelta { poly: p2, .. }) => {
            ThickAtom::DerivDelta { k: *k, q: *q, poly: p1.add(p2) }
        }
        _ => unreachable!("merge only within one key"),
    }
}

fn merge_sl(a: &SlAtom, b: &SlAtom) -> SlAtom {
    match (a, b) {
        (SlAtom::PfW { lambda, density: d1 }, SlAtom::PfW { density: d2, .. }) => {
            SlAtom::PfW { lambda: lambda.clone(), density: d1.add(d2) }
        }
        (SlAtom::DeltaInf { order, density: d1 }, SlAtom::DeltaInf { density: d2, .. }) => {
            SlAtom::DeltaInf { order: *order, density: d1.add(d2) }
        }
        (SlAtom::DeltaLnInf { order, density: d1 }, SlAtom::DeltaLnInf { density: d2, .. }) => {
            SlAtom::DeltaLnInf {
                order: *order,
                density: SpherePoly { n: d1.n, q: d1.q, poly: d1.poly.add(&d2.poly) },
            }
        }
        (
            SlAtom::DerivDeltaOrigin { k, q, poly: p1 },
            SlAtom::DerivDeltaOrigin { poly: p2, .. },
        ) => SlAtom::DerivDeltaOrigin { k: *k, q: *q, poly: p1.add(p2) },
        _ => unreachable!("merge only within one key"),
    }
}

/// Formal sum of thick atoms in canonical form: content folded into atom
/// densities (weights keep only unevaluated gamma-ratio factors), atoms
/// merged per key and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThickDistribution {
    pub n: u32,
    atoms: Vec<(Weight, ThickAtom)>,
}

/// Formal sum of sl-thick atoms, canonical form as for
/// [`ThickDistribution`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlThickDistribution {
    pub n: u32,
    atoms: Vec<(Weight, SlAtom)>,
}

macro_rules! impl_distribution {
    ($name:ident, $atom:ty, $keyfn:ident, $mergefn:ident, $scalefn:ident, $zerofn:ident) => {
        impl $name {
            pub fn zero(n: u32) -> Self {
                $name { n, atoms: Vec::new() }
            }

            pub fn from_atoms(n: u32, atoms: Vec<(Weight, $atom)>) -> Self {
                let mut d = $name { n, atoms };
                d.canonicalize();
                d
            }

            pub fn single(n: u32, atom: $atom) -> Self {
                $name::from_atoms(n, vec![(Weight::one(), atom)])
            }

            pub fn atoms(&self) -> &[(Weight, $atom)] {
                &self.atoms
            }

            pub fn is_zero(&self) -> bool {
                self.atoms.is_empty()
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.n, other.n);
                let mut atoms = self.atoms.clone();
                atoms.extend(other.atoms.iter().cloned());
                $name::from_atoms(self.n, atoms)
            }

            pub fn scale(&self, c: &ExactScalar) -> Self {
                let atoms = self
                    .atoms
                    .iter()
                    .map(|(w, a)| (w.clone(), $scalefn(a, c)))
                    .collect();
                $name::from_atoms(self.n, atoms)
            }

            fn canonicalize(&mut self) {
                let mut grouped: BTreeMap<AtomKey, (Weight, $atom)> = BTreeMap::new();
                for (w, atom) in self.atoms.drain(..) {
                    let w = w.normalized();
                    // fold the exact part of the weight into the density
                    let folded = $scalefn(&atom, &w.exact);
                    let w = Weight { exact: ExactScalar::one(), gamma: w.gamma };
                    let key = $keyfn(&w, &folded);
                    match grouped.remove(&key) {
                        None => {
                            grouped.insert(key, (w, folded));
                        }
                        Some((_, existing)) => {
                            grouped.insert(key, (w, $mergefn(&existing, &folded)));
                        }
                    }
                }
                self.atoms = grouped.into_values().filter(|(_, a)| !$zerofn(a)).collect();
            }
        }
    };
}

impl_distribution!(
    ThickDistribution,
    ThickAtom,
    thick_key,
    merge_thick,
    scale_thick_atom,
    thick_atom_is_zero
);
impl_distribution!(
    SlThickDistribution,
    SlAtom,
    sl_key,
    merge_sl,
    scale_sl_atom,
    sl_atom_is_zero
);

impl ThickDistribution {
    /// `f(-x)`: reflects every density and flips odd derivative atoms.
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|(w, a)| {
                let a = match a {
                    ThickAtom::Pf { lambda, density } => {
                        ThickAtom::Pf { lambda: lambda.clone(), density: density.reflect() }
                    }
                    ThickAtom::Delta { order, density } => {
                        ThickAtom::Delta { order: *order, density: density.reflect() }
                    }
                    ThickAtom::DerivDelta { k, q, poly } => {
                        ThickAtom::DerivDelta { k: *k, q: *q, poly: poly.reflect() }
                    }
                };
                (w.clone(), a)
            })
            .collect();
        ThickDistribution::from_atoms(self.n, atoms)
    }

    pub fn delta(n: u32) -> Self {
        ThickDistribution::single(
            n,
            ThickAtom::DerivDelta { k: 0, q: 0, poly: MultiPoly::constant(n, ExactScalar::one()) },
        )
    }
}

impl SlThickDistribution {
    pub fn reflect(&self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|(w, a)| {
                let a = match a {
                    SlAtom::PfW { lambda, density } => {
                        SlAtom::PfW { lambda: lambda.clone(), density: density.reflect() }
                    }
                    SlAtom::DeltaInf { order, density } => {
                        SlAtom::DeltaInf { order: *order, density: density.reflect() }
                    }
                    SlAtom::DeltaLnInf { order, density } => SlAtom::DeltaLnInf {
                        order: *order,
                        density: SpherePoly {
                            n: density.n,
                            q: density.q,
                            poly: density.poly.reflect(),
                        },
                    },
                    SlAtom::DerivDeltaOrigin { k, q, poly } => {
                        SlAtom::DerivDeltaOrigin { k: *k, q: *q, poly: poly.reflect() }
                    }
                };
                (w.clone(), a)
            })
            .collect();
        SlThickDistribution::from_atoms(self.n, atoms)
    }

    /// Checked constructor for `G delta_inf^[q]`: the density must satisfy
    /// the polynomial-free membership `G in D_q`.
    pub fn delta_inf(n: u32, order: i64, density: AngularFunction) -> Result<Self> {
        if !in_dq(&density, order, n) {
            return Err(Error::NotInDomain);
        }
        Ok(SlThickDistribution::single(n, SlAtom::DeltaInf { order, density }))
    }

    pub fn delta_origin(n: u32) -> Self {
        SlThickDistribution::single(
            n,
            SlAtom::DerivDeltaOrigin {
                k: 0,
                q: 0,
                poly: MultiPoly::constant(n, ExactScalar::one()),
            },
        )
    }
}

// ---------------------------------------------------------------------------
// jets

/// Truncated strong expansion of a thick test function at the origin:
/// `phi(r w) ~ sum_{j=lo}^{hi} a_j(w) r^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThickJet {
    pub n: u32,
    pub lo: i64,
    pub hi: i64,
    coeffs: BTreeMap<i64, AngularFunction>,
}

impl ThickJet {
    pub fn new(n: u32, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi);
        ThickJet { n, lo, hi, coeffs: BTreeMap::new() }
    }

    pub fn set(&mut self, order: i64, a: AngularFunction) {
        assert!(order >= self.lo && order <= self.hi, "order outside jet range");
        if a.is_zero() {
            self.coeffs.remove(&order);
        } else {
            self.coeffs.insert(order, a);
        }
    }

    pub fn coeff(&self, order: i64) -> Result<AngularFunction> {
        if order < self.lo || order > self.hi {
            return Err(Error::TruncationTooShort { order });
        }
        Ok(self.coeffs.get(&order).cloned().unwrap_or_else(|| AngularFunction::zero(self.n)))
    }

    pub fn orders(&self) -> impl Iterator<Item = (&i64, &AngularFunction)> {
        self.coeffs.iter()
    }

    /// `phi(-x)` at jet level: reflects every coefficient.
    pub fn reflect(&self) -> Self {
        let mut out = ThickJet::new(self.n, self.lo, self.hi);
        for (j, a) in &self.coeffs {
            out.set(*j, a.reflect());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = ThickJet::new(self.n, self.lo, self.hi);
        for (j, a) in &self.coeffs {
            out.set(*j, a.scale(c));
        }
        out
    }

    /// Jet of `Y e^{-r^2/2}` for a harmonic density `Y` of top degree `k`:
    /// orders `k, k+2, ..., <= hi` with coefficients `(-1/2)^j / j! * Y`.
    pub fn gaussian(n: u32, harmonic: &AngularFunction, hi: i64) -> Self {
        let k = harmonic.components().keys().next_back().copied().unwrap_or(0) as i64;
        let mut jet = ThickJet::new(n, k.min(0), hi);
        let mut j = 0i64;
        let mut coeff = Rat::one();
        while k + 2 * j <= hi {
            jet.set(k + 2 * j, harmonic.scale_rational(&coeff));
            j += 1;
            coeff *= rat(-1, 2 * j);
        }
        jet
    }
}

/// Which expansion space a [`WFunctionJet`] lives in: the raw image of the
/// transform (possibly with polynomial content in the `A` slots) or the
/// polynomial-free subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetSpace {
    Pre,
    PolynomialFree,
}

/// Truncated expansion at infinity:
/// `Phi(s v) ~ sum_{q=0}^{hi} (A_q(v) + P_q(v) ln s) s^q + sum_{q=lo}^{-1} A_q(v) s^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WFunctionJet {
    pub n: u32,
    pub lo: i64,
    pub hi: i64,
    pub space: JetSpace,
    a: BTreeMap<i64, AngularFunction>,
    p: BTreeMap<i64, SpherePoly>,
}

impl WFunctionJet {
    pub fn new(n: u32, lo: i64, hi: i64, space: JetSpace) -> Self {
        assert!(lo <= hi);
        WFunctionJet { n, lo, hi, space, a: BTreeMap::new(), p: BTreeMap::new() }
    }

    pub fn set_a(&mut self, order: i64, a: AngularFunction) {
        assert!(order >= self.lo && order <= self.hi);
        if self.space == JetSpace::PolynomialFree {
            debug_assert!(in_dq(&a, order, self.n), "A slot must be polynomial free");
        }
        if a.is_zero() {
            self.a.remove(&order);
        } else {
            self.a.insert(order, a);
        }
    }

    pub fn set_p(&mut self, order: i64, p: SpherePoly) {
        assert!(order >= 0 && order <= self.hi);
        if p.is_zero() {
            self.p.remove(&order);
        } else {
            self.p.insert(order, p);
        }
    }

    pub fn a_coeff(&self, order: i64) -> Result<AngularFunction> {
        if order < self.lo || order > self.hi {
            return Err(Error::TruncationTooShort { order });
        }
        Ok(self.a.get(&order).cloned().unwrap_or_else(|| AngularFunction::zero(self.n)))
    }

    pub fn p_coeff(&self, order: i64) -> Result<SpherePoly> {
        if order < 0 || order > self.hi {
            return Err(Error::TruncationTooShort { order });
        }
        Ok(self
            .p
            .get(&order)
            .cloned()
            .unwrap_or_else(|| SpherePoly::zero(self.n, order.max(0) as u32)))
    }

    pub fn a_orders(&self) -> impl Iterator<Item = (&i64, &AngularFunction)> {
        self.a.iter()
    }

    pub fn p_orders(&self) -> impl Iterator<Item = (&i64, &SpherePoly)> {
        self.p.iter()
    }

    /// Drops polynomial parts from every `A` slot (the projection onto the
    /// polynomial-free space); `P` slots are untouched.
    pub fn project_polynomial_free(&self) -> Self {
        let mut out = WFunctionJet::new(self.n, self.lo, self.hi, JetSpace::PolynomialFree);
        for (q, a) in &self.a {
            let kept = if *q >= 0 {
                let (_, rest) = crate::sphere::polynomial_part(a, *q as u32);
                rest
            } else {
                // negative orders: drop components the space excludes
                let excluded = excluded_degrees(*q, self.n);
                let mut rest = AngularFunction::zero(self.n);
                for (d, h) in a.components() {
                    if !excluded.contains(d) {
                        rest.add_component(h.clone());
                    }
                }
                rest
            };
            out.set_a(*q, kept);
        }
        for (q, p) in &self.p {
            out.set_p(*q, p.clone());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// pairing

/// Result of a pairing: exact when every contribution stays in the field.
#[derive(Debug, Clone, PartialEq)]
pub enum PairValue {
    Exact(ExactScalar),
    Approx(FloatApprox),
}

impl PairValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            PairValue::Exact(e) => e.to_f64(),
            PairValue::Approx(f) => f.re,
        }
    }
}

/// Radial-times-angular bulk data for pairing finite-part atoms:
/// the test function is `rho(r) b(w)` with a known radial jet at 0.
pub struct SeparatedBulk<'a> {
    pub radial: &'a dyn Fn(f64) -> f64,
    /// Laurent/Taylor coefficients of `rho` at 0: pairs `(order, coeff)`.
    pub radial_jet: Vec<(i64, Rat)>,
    pub angular: AngularFunction,
}

struct PairAccumulator {
    exact: ExactScalar,
    float: f64,
    bound: f64,
    any_float: bool,
}

impl PairAccumulator {
    fn new() -> Self {
        PairAccumulator { exact: ExactScalar::zero(), float: 0.0, bound: 0.0, any_float: false }
    }

    fn push_exact(&mut self, v: ExactScalar) {
        self.exact = self.exact.add(&v);
    }

    fn push_float(&mut self, v: f64, bound: f64) {
        self.float += v;
        self.bound += bound;
        self.any_float = true;
    }

    fn finish(self) -> PairValue {
        if self.any_float {
            let e = self.exact.to_float(15);
            PairValue::Approx(FloatApprox {
                re: e.re + self.float,
                im: e.im,
                abs_error_bound: e.abs_error_bound + self.bound,
            })
        } else {
            PairValue::Exact(self.exact)
        }
    }
}

fn weight_times_inner(w: &Weight, inner: &ExactScalar, acc: &mut PairAccumulator) -> Result<()> {
    if w.is_exact() {
        acc.push_exact(w.exact.mul(inner)?);
    } else {
        let f = w.to_float(15);
        let i = inner.to_float(15);
        acc.push_float(
            f.re * i.re - f.im * i.im,
            f.abs_error_bound * i.re.abs() + i.abs_error_bound * f.re.abs() + 1e-30,
        );
    }
    Ok(())
}

/// Pairing weight of `Y(grad) lap^q delta` against the order-`(k+2q)` jet
/// coefficient: `(-1)^k 2^{k+2q} q! gamma(q+k+n/2) / gamma(n/2)` times the
/// sphere inner product over `C`. Equivalently, the derivative atom equals
/// this factor times `Y(w) delta_*^[k+2q]` as a functional on jets.
pub(crate) fn deriv_delta_factor(k: u32, q: u32, n: u32) -> ExactScalar {
    let mut fact = Rat::one();
    for j in 2..=q as i64 {
        fact *= rat_int(j);
    }
    let pow2 = Rat::from_integer(BigInt::from(2).pow(k + 2 * q));
    let g_num = gamma_half(&rat(2 * (q + k) as i64 + n as i64, 2)).expect("positive");
    let g_den = gamma_half(&rat(n as i64, 2)).expect("positive");
    let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
    g_num.div_monomial(&g_den).expect("gamma monomial").mul_rational(&(sign * pow2 * fact))
}

fn pair_pf_radial(
    weight: &Weight,
    lambda: &Rat,
    density: &AngularFunction,
    n: u32,
    bulk: &SeparatedBulk<'_>,
    tol: f64,
    acc: &mut PairAccumulator,
) -> Result<()> {
    let inner = density.inner(&bulk.angular);
    if inner.is_zero() {
        return Ok(());
    }
    let lam = rat_to_f64(lambda);
    let core = |r: f64| (bulk.radial)(r) * r.powf(lam);
    let jet: Vec<(Rat, f64)> = bulk
        .radial_jet
        .iter()
        .map(|(j, c)| (lambda + rat_int(*j), rat_to_f64(c)))
        .collect();
    // the radial jet runs through consecutive orders, so the remainder
    // starts one past its top entry (or at lambda itself for smooth bulks)
    let remainder_order = match bulk.radial_jet.iter().map(|(j, _)| *j).max() {
        Some(top) => lambda + rat_int(top + 1),
        None => lambda.clone().max(Rat::zero()),
    };
    let integrand = RadialIntegrand { n, core: &core, subtracted: None, jet, remainder_order };
    let radial = fp_radial_integral(&integrand, tol)?;
    let wf = weight.to_float(15);
    let inf = inner.to_float(15);
    let scalar = wf.re * inf.re - wf.im * inf.im;
    acc.push_float(
        scalar * radial.re,
        radial.abs_error_bound * scalar.abs()
            + radial.re.abs() * (wf.abs_error_bound + inf.abs_error_bound),
    );
    Ok(())
}

/// Pairs a thick distribution against a thick jet (optionally extended by a
/// separated bulk integrand for finite-part atoms).
pub fn pair_thick(
    d: &ThickDistribution,
    jet: &ThickJet,
    bulk: Option<&SeparatedBulk<'_>>,
    tol: f64,
) -> Result<PairValue> {
    let n = d.n;
    let inv_c = ExactScalar::one().div_monomial(&surface_area(n))?;
    let mut acc = PairAccumulator::new();
    for (w, atom) in d.atoms() {
        match atom {
            ThickAtom::Delta { order, density } => {
                let a = jet.coeff(*order)?;
                let inner = density.inner(&a).mul(&inv_c)?;
                weight_times_inner(w, &inner, &mut acc)?;
            }
            ThickAtom::DerivDelta { k, q, poly } => {
                let a = jet.coeff((*k + 2 * *q) as i64)?;
                let y = AngularFunction::from_poly(poly)?;
                let inner = y.inner(&a).mul(&inv_c)?.mul(&deriv_delta_factor(*k, *q, n))?;
                weight_times_inner(w, &inner, &mut acc)?;
            }
            ThickAtom::Pf { lambda, density } => {
                let bulk = bulk.ok_or(Error::MissingBulk)?;
                pair_pf_radial(w, lambda, density, n, bulk, tol, &mut acc)?;
            }
        }
    }
    Ok(acc.finish())
}

/// Pairs an sl-thick distribution against a jet at infinity.
pub fn pair_sl(
    d: &SlThickDistribution,
    jet: &WFunctionJet,
    bulk: Option<&SeparatedBulk<'_>>,
    tol: f64,
) -> Result<PairValue> {
    let n = d.n;
    let inv_c = ExactScalar::one().div_monomial(&surface_area(n))?;
    let mut acc = PairAccumulator::new();
    for (w, atom) in d.atoms() {
        match atom {
            SlAtom::DeltaInf { order, density } => {
                let a = jet.a_coeff(*order)?;
                let inner = density.inner(&a).mul(&inv_c)?;
                weight_times_inner(w, &inner, &mut acc)?;
            }
            SlAtom::DeltaLnInf { order, density } => {
                let p = jet.p_coeff(*order)?;
                let inner = density.to_angular().inner(&p.to_angular()).mul(&inv_c)?;
                weight_times_inner(w, &inner, &mut acc)?;
            }
            SlAtom::DerivDeltaOrigin { .. } => {
                // the jet at infinity carries no data at the origin
                return Err(Error::MissingBulk);
            }
            SlAtom::PfW { lambda, density } => {
                let bulk = bulk.ok_or(Error::MissingBulk)?;
                pair_pf_radial(w, lambda, density, n, bulk, tol, &mut acc)?;
            }
        }
    }
    Ok(acc.finish())
}

// ---------------------------------------------------------------------------
// scaling, generators, multiplication, derivatives, delta parts

/// `t^e` as an exact rational, when it is one.
fn rational_pow(t: &Rat, e: &Rat) -> Option<Rat> {
    if e.is_zero() {
        return Some(Rat::one());
    }
    let p = e.numer().to_i64()?;
    let q = e.denom().to_u32()?;
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = v.nth_root(q);
        if r.clone().pow(q) == *v {
            Some(r)
        } else {
            None
        }
    };
    let base = Rat::new(root(t.numer())?, root(t.denom())?);
    let pow = |b: &Rat, k: u64| -> Rat {
        let mut acc = Rat::one();
        for _ in 0..k {
            acc *= b;
        }
        acc
    };
    Some(if p >= 0 { pow(&base, p as u64) } else { pow(&base, (-p) as u64).recip() })
}

/// `ln t` inside the field: available exactly when `t` is a power of two.
fn ln_exact(t: &Rat) -> Option<ExactScalar> {
    fn log2_of(v: &BigInt) -> Option<i64> {
        let bits = v.bits();
        if *v == BigInt::from(1) << (bits - 1) {
            Some(bits as i64 - 1)
        } else {
            None
        }
    }
    if !t.is_positive() {
        return None;
    }
    let k = log2_of(t.numer())? - log2_of(t.denom())?;
    Some(ExactScalar::ln2_times(rat_int(k)))
}

/// Scalar change of variables `tau_{tI}` on sl-thick atoms, `t > 0`
/// rational. Catalog rules:
///
/// - `delta`: `t^{-n} delta - t^{-n} ln t delta_{ln,inf}^[0]`
/// - `PfW(s^lambda)`: `t^lambda` times the same atom on the analytic set
/// - `G delta_inf^[q]` and `H delta_{ln,inf}^[q]`: `t^{-n-q}` times the same
///
/// Errors with [`Error::InexactScale`] when `t^lambda` or `ln t` leaves the
/// exact field, and [`Error::UnsupportedAtomScaling`] where the calculus has
/// no rule (finite-part powers at their poles, higher derivative atoms).
pub fn tau_scale(f: &SlThickDistribution, t: &Rat) -> Result<SlThickDistribution> {
    if !t.is_positive() {
        return Err(Error::UnsupportedAtomScaling);
    }
    let n = f.n;
    let mut out: Vec<(Weight, SlAtom)> = Vec::new();
    for (w, atom) in f.atoms() {
        match atom {
            SlAtom::DeltaInf { order, .. } | SlAtom::DeltaLnInf { order, .. } => {
                let factor =
                    rational_pow(t, &rat_int(-(n as i64) - order)).ok_or(Error::InexactScale)?;
                out.push((w.mul_exact(&ExactScalar::from_rational(factor))?, atom.clone()));
            }
            SlAtom::PfW { lambda, .. } => {
                // analytic set of the finite-part power family: non-integer
                // lambda, or even lambda >= 0
                let analytic = if lambda.denom().is_one() {
                    let l = lambda.numer().to_i64().ok_or(Error::UnsupportedAtomScaling)?;
                    l >= 0 && l % 2 == 0
                } else {
                    true
                };
                if !analytic {
                    return Err(Error::UnsupportedAtomScaling);
                }
                let factor = rational_pow(t, lambda).ok_or(Error::InexactScale)?;
                out.push((w.mul_exact(&ExactScalar::from_rational(factor))?, atom.clone()));
            }
            SlAtom::DerivDeltaOrigin { k: 0, q: 0, poly } => {
                let tn = rational_pow(t, &rat_int(-(n as i64))).ok_or(Error::InexactScale)?;
                let ln_t = ln_exact(t).ok_or(Error::InexactScale)?;
                let tn = ExactScalar::from_rational(tn);
                out.push((
                    w.mul_exact(&tn)?,
                    SlAtom::DerivDeltaOrigin { k: 0, q: 0, poly: poly.clone() },
                ));
                let log_weight = tn.mul(&ln_t)?.neg();
                let density = SpherePoly::new(0, poly.scale(&log_weight))?;
                out.push((w.clone(), SlAtom::DeltaLnInf { order: 0, density }));
            }
            SlAtom::DerivDeltaOrigin { .. } => return Err(Error::UnsupportedAtomScaling),
        }
    }
    Ok(SlThickDistribution::from_atoms(n, out))
}

/// The one-dimensional space of radial homogeneous sl-thick distributions of
/// order `lambda`: `PfW(s^lambda)` off the integer pole sets,
/// `delta_inf^[-n-m]` on the simple-pole set, `delta_{ln,inf}^[-n-m]` for
/// `m <= -n` of matching parity.
pub fn radial_homogeneous_generator(lambda: &Rat, n: u32) -> SlThickDistribution {
    if lambda.denom().is_one() {
        let m = lambda.numer().to_i64().expect("parameter in range");
        if pfw_simple_pole(m, n) {
            return SlThickDistribution::single(
                n,
                SlAtom::DeltaInf { order: -(n as i64) - m, density: AngularFunction::one(n) },
            );
        }
        if m <= -(n as i64) && (m + n as i64) % 2 == 0 {
            let q = (-(n as i64) - m) as u32;
            return SlThickDistribution::single(
                n,
                SlAtom::DeltaLnInf { order: q as i64, density: lift_constant_to_sphere_poly(n, q) },
            );
        }
    }
    SlThickDistribution::single(
        n,
        SlAtom::PfW { lambda: lambda.clone(), density: AngularFunction::one(n) },
    )
}

/// Plain density `1` realized as an element of `P_q` (requires even `q`).
pub fn lift_constant_to_sphere_poly(n: u32, q: u32) -> SpherePoly {
    assert!(q % 2 == 0);
    let mut p = MultiPoly::constant(n, ExactScalar::one());
    let r2 = MultiPoly::r_squared(n);
    for _ in 0..(q / 2) {
        p = p.mul(&r2);
    }
    SpherePoly { n, q, poly: p }
}

/// Simple-pole set of `PfW(s^lambda)`: all integers outside
/// `{0, 2, 4, ...}` and outside `{-n, -n-2, ...}`.
pub fn pfw_simple_pole(m: i64, n: u32) -> bool {
    let analytic_even = m >= 0 && m % 2 == 0;
    let log_pole = m <= -(n as i64) && (m + n as i64) % 2 == 0;
    !analytic_even && !log_pole
}

/// Coordinate multiplication `M_{u_j}` on sl-thick atoms: the product rule
/// `M_{u_j} PfW(s^lambda A) = PfW(s^{lambda+1} v_j A)` and the boundary rule
/// `M_{u_j} delta = -v_j delta_inf^[-1]`; other atoms have no printed rule.
pub fn multiply_coordinate(f: &SlThickDistribution, j: usize) -> Result<SlThickDistribution> {
    let n = f.n;
    if j >= n as usize {
        return Err(Error::OutOfRange);
    }
    let mut out: Vec<(Weight, SlAtom)> = Vec::new();
    for (w, atom) in f.atoms() {
        match atom {
            SlAtom::PfW { lambda, density } => {
                let vj = MultiPoly::coordinate(n, j);
                let product = AngularFunction::from_poly(&vj.mul(&density.to_poly()))?;
                out.push((w.clone(), SlAtom::PfW { lambda: lambda + Rat::one(), density: product }));
            }
            SlAtom::DerivDeltaOrigin { k: 0, q: 0, poly } => {
                let vj = MultiPoly::coordinate(n, j);
                let density = AngularFunction::from_poly(&vj.mul(poly))?
                    .scale(&ExactScalar::from_integer(-1));
                out.push((w.clone(), SlAtom::DeltaInf { order: -1, density }));
            }
            _ => return Err(Error::UnsupportedAtomMultiplication),
        }
    }
    Ok(SlThickDistribution::from_atoms(n, out))
}

/// Derivative mode for [`derivative_ops`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Distributional derivative in `D'`: a delta part appears only at the
    /// resonance `k - n = 2m >= 0` even.
    Distributional,
    /// Thick derivative in `D_*'`: the boundary delta part
    /// `C w_i delta_*^[k+1-n]` appears for every integer `k`.
    Thick,
}

/// Derivative of `Pf(r^{-k})` along axis `i`: ordinary part
/// `Pf(-k x_i r^{-k-2})` plus the mode's delta part.
pub fn derivative_ops(k: i64, n: u32, axis: usize, mode: DerivativeMode) -> ThickDistribution {
    assert!(axis < n as usize);
    let xi = MultiPoly::coordinate(n, axis);
    let ordinary_density = AngularFunction::from_poly(&xi.scale_rational(&rat_int(-k)))
        .expect("coordinate polynomial");
    let mut atoms = vec![(
        Weight::one(),
        ThickAtom::Pf { lambda: rat_int(-k - 1), density: ordinary_density },
    )];
    match mode {
        DerivativeMode::Distributional => {
            // delta part -(c_{m,n} / ((2m)! k)) grad_i lap^m delta at k-n = 2m
            if k >= n as i64 && (k - n as i64) % 2 == 0 {
                let m = ((k - n as i64) / 2) as u32;
                let mut fact = Rat::one();
                for j in 2..=(2 * m) as i64 {
                    fact *= rat_int(j);
                }
                let coeff =
                    c_const(m, n).mul_rational(&(Rat::one() / (fact * rat_int(k)))).neg();
                atoms.push((
                    Weight::one(),
                    ThickAtom::DerivDelta { k: 1, q: m, poly: xi.scale(&coeff) },
                ));
            }
        }
        DerivativeMode::Thick => {
            // boundary term of the thick derivative, order k+1-n
            let density =
                AngularFunction::from_poly(&xi.scale(&surface_area(n))).expect("coordinate");
            atoms.push((Weight::one(), ThickAtom::Delta { order: k + 1 - n as i64, density }));
        }
    }
    ThickDistribution::from_atoms(n, atoms)
}

/// Regularization descriptors whose delta part the catalog knows.
pub enum Regularization {
    /// `Pf(f_0)` itself: the delta part is zero by definition.
    FinitePart,
    /// `lambda^{n+2m} Pf(|lambda x|^{-n-2m})`: delta part
    /// `ln(lambda) C delta_*^[2m]`.
    ScaledPf { m: u32, lambda: Rat },
    /// Distributional derivative `grad_i Pf(r^{-k})`: delta part
    /// `-(c_{m,n}/((2m)! k)) grad_i lap^m delta` when `k - n = 2m >= 0`.
    DistributionalDerivPf { k: i64, axis: usize },
}

/// Delta part (the regularization minus `Pf` of its ordinary part),
/// supported at the origin.
pub fn delta_part(reg: Regularization, n: u32) -> Result<ThickDistribution> {
    match reg {
        Regularization::FinitePart => Ok(ThickDistribution::zero(n)),
        Regularization::ScaledPf { m, lambda } => {
            let ln_l = ln_exact(&lambda).ok_or(Error::InexactScale)?;
            let weight = ln_l.mul(&surface_area(n))?;
            Ok(ThickDistribution::single(
                n,
                ThickAtom::Delta {
                    order: 2 * m as i64,
                    density: AngularFunction::constant(n, weight),
                },
            ))
        }
        Regularization::DistributionalDerivPf { k, axis } => {
            let full = derivative_ops(k, n, axis, DerivativeMode::Distributional);
            let atoms = full
                .atoms()
                .iter()
                .filter(|(_, a)| matches!(a, ThickAtom::DerivDelta { .. }))
                .cloned()
                .collect();
            Ok(ThickDistribution::from_atoms(n, atoms))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_delta(n: u32, order: i64) -> ThickDistribution {
        ThickDistribution::single(n, ThickAtom::Delta { order, density: AngularFunction::one(n) })
    }

    #[test]
    fn thick_delta_reads_jet() {
        // <delta_*^[0], phi> with a_0 = 5 gives 5
        let d = plain_delta(3, 0);
        let mut jet = ThickJet::new(3, 0, 2);
        jet.set(0, AngularFunction::constant(3, ExactScalar::from_integer(5)));
        let v = pair_thick(&d, &jet, None, 1e-10).unwrap();
        assert_eq!(v, PairValue::Exact(ExactScalar::from_integer(5)));
    }

    #[test]
    fn delta_inf_zero_slot() {
        let d = SlThickDistribution::delta_inf(3, 1, AngularFunction::one(3)).unwrap();
        let jet = WFunctionJet::new(3, -2, 2, JetSpace::PolynomialFree);
        let v = pair_sl(&d, &jet, None, 1e-10).unwrap();
        assert_eq!(v, PairValue::Exact(ExactScalar::zero()));
    }

    #[test]
    fn log_delta_reads_p_slot() {
        // <H delta_{ln,inf}^[2], Phi> = (1/C) <H, P_2>
        let h = lift_constant_to_sphere_poly(3, 2);
        let d = SlThickDistribution::single(3, SlAtom::DeltaLnInf { order: 2, density: h });
        let mut jet = WFunctionJet::new(3, -1, 3, JetSpace::PolynomialFree);
        jet.set_p(2, lift_constant_to_sphere_poly(3, 2));
        let v = pair_sl(&d, &jet, None, 1e-10).unwrap();
        // restrictions of both to the sphere are 1, so the pairing is 1
        assert_eq!(v, PairValue::Exact(ExactScalar::one()));
    }

    #[test]
    fn truncation_too_short() {
        let d = plain_delta(3, 4);
        let jet = ThickJet::new(3, -1, 2);
        assert!(matches!(
            pair_thick(&d, &jet, None, 1e-10),
            Err(Error::TruncationTooShort { order: 4 })
        ));
    }

    #[test]
    fn pf_needs_bulk() {
        let d = ThickDistribution::single(
            3,
            ThickAtom::Pf { lambda: rat(-1, 2), density: AngularFunction::one(3) },
        );
        let jet = ThickJet::new(3, -1, 2);
        assert!(matches!(pair_thick(&d, &jet, None, 1e-8), Err(Error::MissingBulk)));
    }

    #[test]
    fn delta_inf_rejects_polynomial_density() {
        // constants are excluded from D_q at even q >= 0
        assert!(SlThickDistribution::delta_inf(3, 2, AngularFunction::one(3)).is_err());
        assert!(SlThickDistribution::delta_inf(3, 1, AngularFunction::one(3)).is_ok());
    }

    #[test]
    fn tau_scale_delta_matches_catalog() {
        // tau_t(delta) = t^{-n} delta - t^{-n} ln t delta_{ln,inf}^[0]
        let d = SlThickDistribution::delta_origin(3);
        let t = rat(2, 1);
        let scaled = tau_scale(&d, &t).unwrap();
        let tn = ExactScalar::from_rational(rat(1, 8));
        let expected = SlThickDistribution::from_atoms(
            3,
            vec![
                (
                    Weight::one(),
                    SlAtom::DerivDeltaOrigin {
                        k: 0,
                        q: 0,
                        poly: MultiPoly::constant(3, tn.clone()),
                    },
                ),
                (
                    Weight::one(),
                    SlAtom::DeltaLnInf {
                        order: 0,
                        density: SpherePoly::new(
                            0,
                            MultiPoly::constant(
                                3,
                                tn.mul(&ExactScalar::ln2_times(rat_int(-1))).unwrap(),
                            ),
                        )
                        .unwrap(),
                    },
                ),
            ],
        );
        assert_eq!(scaled, expected);
        // identity at t = 1
        assert_eq!(tau_scale(&d, &Rat::one()).unwrap(), d);
    }

    #[test]
    fn tau_scale_round_trip() {
        // tau_{1/t} tau_t = id on catalog atoms
        let atoms = vec![
            SlThickDistribution::delta_origin(3),
            radial_homogeneous_generator(&rat(-1, 2), 3),
            radial_homogeneous_generator(&rat(3, 1), 3),
            radial_homogeneous_generator(&rat(-3, 1), 3),
        ];
        let t = rat(4, 1);
        for d in atoms {
            let back = tau_scale(&tau_scale(&d, &t).unwrap(), &t.clone().recip()).unwrap();
            assert_eq!(back, d);
        }
    }

    #[test]
    fn tau_scale_pfw_homogeneity() {
        // the weight picks up exactly t^lambda on the analytic set
        let f = radial_homogeneous_generator(&rat(-1, 2), 3);
        let scaled = tau_scale(&f, &rat(4, 1)).unwrap();
        assert_eq!(scaled, f.scale(&ExactScalar::from_rational(rat(1, 2))));
        // non-perfect-power base cannot stay exact
        assert!(matches!(tau_scale(&f, &rat(3, 1)), Err(Error::InexactScale)));
    }

    #[test]
    fn generator_classification() {
        // lambda = -1/2: finite part power
        let g = radial_homogeneous_generator(&rat(-1, 2), 3);
        assert!(matches!(g.atoms()[0].1, SlAtom::PfW { .. }));
        // lambda = 3 (odd positive): thick delta at infinity of order -6
        let g3 = radial_homogeneous_generator(&rat(3, 1), 3);
        assert!(matches!(g3.atoms()[0].1, SlAtom::DeltaInf { order: -6, .. }));
        // lambda = -3 = -n: log delta of order 0
        let gm3 = radial_homogeneous_generator(&rat(-3, 1), 3);
        assert!(matches!(gm3.atoms()[0].1, SlAtom::DeltaLnInf { order: 0, .. }));
        // lambda = 4 (even positive): analytic finite part power
        let g4 = radial_homogeneous_generator(&rat(4, 1), 3);
        assert!(matches!(g4.atoms()[0].1, SlAtom::PfW { .. }));
    }

    #[test]
    fn multiply_coordinate_rules() {
        // M_{u_j} PfW(s^l) = PfW(u_j s^l)
        let f = radial_homogeneous_generator(&rat(-1, 2), 3);
        let m = multiply_coordinate(&f, 0).unwrap();
        match &m.atoms()[0].1 {
            SlAtom::PfW { lambda, density } => {
                assert_eq!(*lambda, rat(1, 2));
                assert_eq!(
                    density,
                    &AngularFunction::from_poly(&MultiPoly::coordinate(3, 0)).unwrap()
                );
            }
            other => panic!("unexpected atom {other:?}"),
        }
        // M_{u_j} delta = -v_j delta_inf^[-1]
        let d = multiply_coordinate(&SlThickDistribution::delta_origin(3), 1).unwrap();
        match &d.atoms()[0].1 {
            SlAtom::DeltaInf { order, density } => {
                assert_eq!(*order, -1);
                assert_eq!(
                    density,
                    &AngularFunction::from_poly(
                        &MultiPoly::coordinate(3, 1).scale(&ExactScalar::from_integer(-1))
                    )
                    .unwrap()
                );
            }
            other => panic!("unexpected atom {other:?}"),
        }
        // zero in, zero out
        assert!(multiply_coordinate(&SlThickDistribution::zero(3), 0).unwrap().is_zero());
    }

    #[test]
    fn derivative_distributional_resonant() {
        // k=3, n=3: Pf(-3 x_i r^{-5}) - (4pi/3) grad_i delta
        let d = derivative_ops(3, 3, 0, DerivativeMode::Distributional);
        assert_eq!(d.atoms().len(), 2);
        match &d.atoms()[0].1 {
            ThickAtom::Pf { lambda, density } => {
                assert_eq!(*lambda, rat(-4, 1));
                assert_eq!(
                    density,
                    &AngularFunction::from_poly(
                        &MultiPoly::coordinate(3, 0).scale_rational(&rat(-3, 1))
                    )
                    .unwrap()
                );
            }
            other => panic!("unexpected atom {other:?}"),
        }
        match &d.atoms()[1].1 {
            ThickAtom::DerivDelta { k: 1, q: 0, poly } => {
                let expected =
                    MultiPoly::coordinate(3, 0).scale(&c_const(0, 3).mul_rational(&rat(-1, 3)));
                assert_eq!(poly, &expected);
            }
            other => panic!("unexpected atom {other:?}"),
        }
    }

    #[test]
    fn derivative_distributional_nonresonant() {
        // k=2, n=3: k-n odd, no delta part
        let d = derivative_ops(2, 3, 0, DerivativeMode::Distributional);
        assert_eq!(d.atoms().len(), 1);
        assert!(matches!(&d.atoms()[0].1, ThickAtom::Pf { .. }));
    }

    #[test]
    fn derivative_thick_boundary_term() {
        // k=3, n=3: delta part C w_i delta_*^[k+1-n] = 4pi w_i delta_*^[1]
        let d = derivative_ops(3, 3, 0, DerivativeMode::Thick);
        let delta = d
            .atoms()
            .iter()
            .find_map(|(_, a)| match a {
                ThickAtom::Delta { order, density } => Some((*order, density.clone())),
                _ => None,
            })
            .expect("thick delta part");
        assert_eq!(delta.0, 1);
        let expected =
            AngularFunction::from_poly(&MultiPoly::coordinate(3, 0).scale(&surface_area(3)))
                .unwrap();
        assert_eq!(delta.1, expected);
    }

    #[test]
    fn delta_part_scaled_pf() {
        // lambda^{n+2m} Pf(|lambda x|^{-n-2m}) has delta part
        // ln(lambda) C delta_*^[2m]
        let d = delta_part(Regularization::ScaledPf { m: 1, lambda: rat(2, 1) }, 3).unwrap();
        match &d.atoms()[0].1 {
            ThickAtom::Delta { order: 2, density } => {
                let expected = AngularFunction::constant(
                    3,
                    ExactScalar::ln2_times(Rat::one()).mul(&surface_area(3)).unwrap(),
                );
                assert_eq!(density, &expected);
            }
            other => panic!("unexpected atom {other:?}"),
        }
        // Pf regularizations have zero delta part
        assert!(delta_part(Regularization::FinitePart, 3).unwrap().is_zero());
    }

    #[test]
    fn pairing_linear_in_both_slots() {
        let d1 = plain_delta(3, 0);
        let d2 = plain_delta(3, 2).scale(&ExactScalar::from_integer(3));
        let sum = d1.add(&d2);
        let mut jet = ThickJet::new(3, 0, 2);
        jet.set(0, AngularFunction::constant(3, ExactScalar::from_integer(2)));
        jet.set(2, AngularFunction::constant(3, ExactScalar::from_integer(7)));
        let v_sum = pair_thick(&sum, &jet, None, 1e-10).unwrap();
        let v1 = pair_thick(&d1, &jet, None, 1e-10).unwrap();
        let v2 = pair_thick(&d2, &jet, None, 1e-10).unwrap();
        match (v_sum, v1, v2) {
            (PairValue::Exact(s), PairValue::Exact(a), PairValue::Exact(b)) => {
                assert_eq!(s, a.add(&b));
                assert_eq!(s, ExactScalar::from_integer(2 + 21));
            }
            _ => panic!("expected exact pairings"),
        }
    }
}

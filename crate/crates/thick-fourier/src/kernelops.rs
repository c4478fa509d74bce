//! Kernel-operator coefficient tables and the diagonal operators they
//! drive: `kappa_{beta,m}` and the log-slot coefficients
//! `lambda_{q,q-2m}`, the full-sphere action of `K_beta` (with its
//! logarithmic companion at natural `beta`), and the restricted
//! isomorphisms on `D_q` and `P_q` with their inverses.
//!
//! Exact values are produced whenever `beta` is an integer (both gamma
//! arguments then lie on the half-integer lattice); other parameters carry
//! an unevaluated gamma-ratio factor so that inverse transforms can cancel
//! it exactly, with a float view available on demand.

use num::{BigInt, One, Signed, ToPrimitive};

use crate::scalars::{
    digamma_half, gamma_half, ExactScalar, FloatApprox, GammaFactor, Weight,
};
use crate::sphere::{excluded_degrees, in_dq, AngularFunction, HarmonicPoly};
use crate::{rat, rat_int, Error, Rat, Result};

/// One diagonal coefficient: a weight (exact or gamma-symbolic) plus a flag
/// marking coefficients that multiply the `ln s` slot.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoefficient {
    pub value: Weight,
    pub log_flag: bool,
}

impl KernelCoefficient {
    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }

    pub fn to_float(&self) -> FloatApprox {
        self.value.to_float(15)
    }
}

fn is_nonpositive_integer(x: &Rat) -> bool {
    x.denom().is_one() && !x.is_positive()
}

/// True when the resonant formula governs `(beta, m)`: `beta` a
/// non-negative integer and `m` in `{beta, beta-2, ...} >= 0`.
pub fn is_resonant(beta: &Rat, m: u32) -> bool {
    if !beta.denom().is_one() || beta.is_negative() {
        return false;
    }
    match beta.numer().to_i64() {
        Some(q) => q >= m as i64 && (q - m as i64) % 2 == 0,
        None => false,
    }
}

/// `kappa_{beta,m} = i^m pi^{n/2} 2^{-beta} gamma((m-beta)/2) /
/// gamma((m+n+beta)/2)`, with the resonant replacement
/// `kappa_{q,q-2j} = i^q pi^{n/2} 2^{-q} (psi(1+j) + psi(n/2+q-j) + 2 ln2)
/// / (j! gamma(n/2+q-j))` when `beta = q` is natural and `m = q - 2j`.
///
/// A pole in the denominator gamma makes the coefficient exactly zero; a
/// pole in the numerator gamma outside the resonant case is an error.
pub fn kappa_coeff(beta: &Rat, m: u32, n: u32) -> Result<KernelCoefficient> {
    if is_resonant(beta, m) {
        let q = beta.numer().to_i64().unwrap();
        let j = (q - m as i64) / 2;
        // i^q = i^m (-1)^j, kept as the literal i^q of the formula
        let mut fact = Rat::one();
        for i in 2..=j {
            fact *= rat_int(i);
        }
        let g = gamma_half(&rat(n as i64 + 2 * (q - j), 2))?;
        let psi_sum = digamma_half(&rat_int(1 + j))?
            .add(&digamma_half(&rat(n as i64 + 2 * (q - j), 2))?)
            .add(&ExactScalar::ln2_times(rat_int(2)));
        let pow2 = Rat::one() / Rat::from_integer(BigInt::from(2).pow(q as u32));
        let base = ExactScalar::i_pow(q)
            .mul(&ExactScalar::pi_pow_half(n as i64))?
            .mul_rational(&(pow2 / fact));
        let value = base.div_monomial(&g)?.mul(&psi_sum)?;
        return Ok(KernelCoefficient { value: Weight::from_exact(value), log_flag: false });
    }
    let num_arg = (rat_int(m as i64) - beta) / rat_int(2);
    let den_arg = (rat_int(m as i64 + n as i64) + beta) / rat_int(2);
    if is_nonpositive_integer(&den_arg) {
        // 1/gamma at a pole: the coefficient vanishes
        return Ok(KernelCoefficient {
            value: Weight::from_exact(ExactScalar::zero()),
            log_flag: false,
        });
    }
    if is_nonpositive_integer(&num_arg) {
        return Err(Error::PoleInGamma { beta: beta.to_string(), m });
    }
    let phase = ExactScalar::i_pow(m as i64).mul(&ExactScalar::pi_pow_half(n as i64))?;
    let value = Weight {
        exact: phase,
        gamma: GammaFactor::new(-beta.clone(), vec![num_arg], vec![den_arg]),
    }
    .normalized();
    Ok(KernelCoefficient { value, log_flag: false })
}

/// `lambda_{q,q-2m} = -i^q 2^{-q+1} pi^{n/2} / (m! gamma(n/2+q-m))`, the
/// `ln s`-slot coefficient for degree `q-2m`, `0 <= 2m <= q`.
pub fn lambda_coeff(q: u32, m: u32, n: u32) -> Result<KernelCoefficient> {
    if 2 * m > q {
        return Err(Error::OutOfRange);
    }
    let mut fact = Rat::one();
    for i in 2..=m as i64 {
        fact *= rat_int(i);
    }
    let g = gamma_half(&rat(n as i64 + 2 * (q as i64 - m as i64), 2))?;
    let pow2 = if q >= 1 {
        Rat::from_integer(BigInt::from(2)) / Rat::from_integer(BigInt::from(2).pow(q))
    } else {
        rat_int(2)
    };
    let value = ExactScalar::i_pow(q as i64)
        .mul(&ExactScalar::pi_pow_half(n as i64))?
        .mul_rational(&(-pow2 / fact))
        .div_monomial(&g)?;
    Ok(KernelCoefficient { value: Weight::from_exact(value), log_flag: true })
}

/// Diagonal action of the full operator `K_beta` on a finite harmonic sum,
/// with per-component weights (symbolic at non-integer `beta`) and the
/// logarithmic companion that appears when `beta` is a natural number.
pub struct KernelAction {
    pub main: Vec<(Weight, HarmonicPoly)>,
    pub log_part: AngularFunction,
}

/// Applies `K_beta` component-wise: degree `m` is multiplied by
/// `kappa_{beta,m}` (resonant values included); the log part collects
/// `lambda_{beta,beta-2j}` times the matching components for natural
/// `beta`.
pub fn apply_k(beta: &Rat, a: &AngularFunction, n: u32) -> Result<KernelAction> {
    let mut main = Vec::new();
    let mut log_part = AngularFunction::zero(n);
    for (m, h) in a.components() {
        let kappa = kappa_coeff(beta, *m, n)?;
        if !kappa.value.is_zero() {
            main.push((kappa.value, h.clone()));
        }
        if is_resonant(beta, *m) {
            let q = beta.numer().to_u32().unwrap();
            let j = (q - *m) / 2;
            let lambda = lambda_coeff(q, j, n)?;
            let value = lambda.value.exact;
            log_part.add_component(HarmonicPoly { degree: *m, poly: h.poly.scale(&value) });
        }
    }
    Ok(KernelAction { main, log_part })
}

/// Exact variant of [`apply_k`] for integer `beta`: folds every weight into
/// the output densities and returns `(main, log_part)`.
pub fn apply_k_exact(beta: i64, a: &AngularFunction, n: u32) -> Result<(AngularFunction, AngularFunction)> {
    let action = apply_k(&rat_int(beta), a, n)?;
    let mut main = AngularFunction::zero(n);
    for (w, h) in action.main {
        debug_assert!(w.is_exact(), "integer beta always folds");
        main.add_component(HarmonicPoly { degree: h.degree, poly: h.poly.scale(&w.exact) });
    }
    Ok((main, action.log_part))
}

/// Which restricted operator [`frak_apply`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrakMode {
    /// The isomorphism of `D_q` (projection of `K_q` to the space).
    K,
    /// The isomorphism of `P_q` driven by the log-slot coefficients.
    L,
}

/// The restricted diagonal operators: for mode `K`, requires the input in
/// `D_q` and acts by `kappa_{q,m}` per degree, the inverse being
/// `(2 pi)^{-n} frak K_{-n-q}` composed with the reflection `w -> -w`;
/// for mode `L`, requires the input in `P_q` and multiplies degree `q-2m`
/// by `lambda_{q,q-2m}` (plain diagonal inverse).
pub fn frak_apply(
    q: i64,
    a: &AngularFunction,
    n: u32,
    inverse: bool,
    mode: FrakMode,
) -> Result<AngularFunction> {
    match mode {
        FrakMode::K => {
            if !in_dq(a, q, n) {
                return Err(Error::NotInDomain);
            }
            if !inverse {
                let (main, _) = apply_k_exact(q, a, n)?;
                Ok(main)
            } else {
                // (a 28): frak K_q^{-1}{A; w} = (2 pi)^{-n} frak K_{-n-q}{A; -w}
                let (main, _) = apply_k_exact(-(n as i64) - q, &a.reflect(), n)?;
                let inv = ExactScalar::one().div_monomial(&ExactScalar::two_pi_pow(n))?;
                Ok(main.scale(&inv))
            }
        }
        FrakMode::L => {
            if q < 0 {
                return Err(Error::OutOfRange);
            }
            // membership in P_q: only degrees q, q-2, ...
            let allowed = excluded_degrees(q, n);
            if !a.components().keys().all(|d| allowed.contains(d)) {
                return Err(Error::NotInDomain);
            }
            let mut out = AngularFunction::zero(n);
            for (d, h) in a.components() {
                let j = (q as u32 - d) / 2;
                let lambda = lambda_coeff(q as u32, j, n)?.value.exact;
                let factor = if inverse {
                    ExactScalar::one().div_monomial(&lambda)?
                } else {
                    lambda
                };
                out.add_component(HarmonicPoly { degree: *d, poly: h.poly.scale(&factor) });
            }
            Ok(out)
        }
    }
}

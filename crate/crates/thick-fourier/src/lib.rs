//! Exact coefficient calculus for the Fourier transform of distributions with
//! a thick point at the origin, paired with an independent numeric oracle.
//!
//! The library has three layers:
//!
//! - exact arithmetic over `Q[i, pi^(1/2)] (+) Q·gamma (+) Q·ln2` together
//!   with harmonic-polynomial algebra on the sphere in `n` variables
//!   ([`scalars`], [`sphere`]),
//! - the kernel-operator coefficient tables and the atom-rewrite engine that
//!   maps distributions thick at the origin to distributions on the one-point
//!   compactification and back ([`kernelops`], [`distributions`], [`fourier`],
//!   [`finitepart`]),
//! - adaptive quadrature and Gaussian-pairing verification cases that check
//!   every closed form numerically ([`quad`], [`oracle`]).

pub mod scalars;
pub mod sphere;
pub mod quad;
pub mod finitepart;
pub mod kernelops;
pub mod distributions;
pub mod fourier;
pub mod oracle;
pub mod json;
pub mod cli;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Arbitrary-precision rational, the base coefficient type everywhere.
pub type Rat = num::BigRational;

pub(crate) fn rat(num: i64, den: i64) -> Rat {
    use num::BigInt;
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn rat_int(v: i64) -> Rat {
    rat(v, 1)
}

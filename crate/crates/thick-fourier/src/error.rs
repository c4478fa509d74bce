use std::fmt;

/// Error type shared by all modules.
///
/// Each variant corresponds to a named domain error; [`Error::name`] returns
/// the stable name the CLI echoes on exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma/digamma argument outside the positive half-integer lattice.
    NonPositiveOrNonHalfInteger,
    /// Exact gamma requested at a non-positive integer (a pole).
    GammaPole,
    /// Product of two scalars that both carry gamma or ln2 parts.
    TranscendenceGuard,
    /// Input polynomial is not homogeneous.
    NotHomogeneous,
    /// Queried a pole the family has no stored principal part for.
    UnknownPoleStructure,
    /// Radial jet does not make the subtracted remainder integrable.
    InsufficientJet,
    /// Adaptive quadrature could not reach the requested tolerance.
    QuadratureFailure { detail: String },
    /// Kernel coefficient hit a gamma pole outside the resonant case.
    PoleInGamma { beta: String, m: u32 },
    /// Coefficient index outside its admissible range.
    OutOfRange,
    /// Operator applied to a function outside its domain space.
    NotInDomain,
    /// Jet does not cover an order the pairing needs to read.
    TruncationTooShort { order: i64 },
    /// Pairing a finite-part atom needs a bulk integrand, none was given.
    MissingBulk,
    /// Jet transform input/output ranges are not aligned.
    TruncationMismatch,
    /// No scaling rule for this atom at this parameter value.
    UnsupportedAtomScaling,
    /// Scaling factor (t^lambda or ln t) leaves the exact coefficient field.
    InexactScale,
    /// No coordinate-multiplication rule for this atom.
    UnsupportedAtomMultiplication,
    /// No transform rule for this atom in the catalog.
    UnsupportedAtomTransform { detail: String },
    /// Chi constant undefined: a digamma argument is a non-positive integer.
    ChiUndefined,
    /// Malformed input file or schema violation.
    Parse { detail: String },
}

impl Error {
    /// Stable variant name, used by the CLI when reporting domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPositiveOrNonHalfInteger => "NonPositiveOrNonHalfInteger",
            Error::GammaPole => "GammaPole",
            Error::TranscendenceGuard => "TranscendenceGuard",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::UnknownPoleStructure => "UnknownPoleStructure",
            Error::InsufficientJet => "InsufficientJet",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::PoleInGamma { .. } => "PoleInGamma",
            Error::OutOfRange => "OutOfRange",
            Error::NotInDomain => "NotInDomain",
            Error::TruncationTooShort { .. } => "TruncationTooShort",
            Error::MissingBulk => "MissingBulk",
            Error::TruncationMismatch => "TruncationMismatch",
            Error::UnsupportedAtomScaling => "UnsupportedAtomScaling",
            Error::InexactScale => "InexactScale",
            Error::UnsupportedAtomMultiplication => "UnsupportedAtomMultiplication",
            Error::UnsupportedAtomTransform { .. } => "UnsupportedAtomTransform",
            Error::ChiUndefined => "ChiUndefined",
            Error::Parse { .. } => "Parse",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QuadratureFailure { detail } => write!(f, "QuadratureFailure: {detail}"),
            Error::PoleInGamma { beta, m } => {
                write!(f, "PoleInGamma: beta={beta}, harmonic degree {m}")
            }
            Error::TruncationTooShort { order } => {
                write!(f, "TruncationTooShort: jet does not reach order {order}")
            }
            Error::UnsupportedAtomTransform { detail } => {
                write!(f, "UnsupportedAtomTransform: {detail}")
            }
            Error::Parse { detail } => write!(f, "Parse: {detail}"),
            other => f.write_str(other.name()),
        }
    }
}

impl std::error::Error for Error {}

use alloc::string::String;
use core::fmt;

/// Errors raised by constructors and operations on malformed or
/// incompatible inputs. Verification failures are not errors; they are
/// reported in the relevant report types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Values of a simplex-category arrow are not weakly increasing or
    /// exceed the target dimension.
    NotMonotone,
    /// An operation received simplices or maps of incompatible dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Two complexes were expected to share a truncation.
    TruncationMismatch { left: usize, right: usize },
    /// A complex is not specified to a high enough dimension for the
    /// requested operation.
    TruncationInsufficient { needed: usize, available: usize },
    /// Horn index out of range, or a horn on the 0-simplex.
    InvalidHorn { n: usize, index: usize },
    /// A precondition of a certificate generator was violated.
    Precondition(String),
    /// Structural problem in a hand-assembled complex, morphism or mask.
    Malformed(String),
    /// An operation requiring a coskeletal bound was called on a complex
    /// without one.
    MissingCoskeletalBound,
    /// A declared coskeletal bound is contradicted by the data: a
    /// compatible boundary family has no filler, or more than one.
    CoskeletalViolation { dim: usize, fillers: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotMonotone => write!(f, "map values are not weakly increasing within range"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::TruncationMismatch { left, right } => {
                write!(f, "truncation mismatch: {left} vs {right}")
            }
            Error::TruncationInsufficient { needed, available } => {
                write!(f, "truncation {available} insufficient, need at least {needed}")
            }
            Error::InvalidHorn { n, index } => write!(f, "invalid horn ({n}, {index})"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Malformed(msg) => write!(f, "malformed input: {msg}"),
            Error::MissingCoskeletalBound => {
                write!(f, "operation requires a complex with a coskeletal bound")
            }
            Error::CoskeletalViolation { dim, fillers } => {
                write!(
                    f,
                    "coskeletal bound violated at dimension {dim}: {fillers} fillers for a boundary family"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

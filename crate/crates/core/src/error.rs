use std::fmt;

/// Errors shared by every evaluation layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A set or tuple did not have the length required by the operation.
    DimensionMismatch { expected: usize, found: usize },
    /// An index or parameter fell outside its documented range.
    OutOfRange(String),
    /// A permutation mapping was not a bijection on `{1..c}`.
    NotABijection,
    /// Exact mode was asked to raise a weight to a non-integer exponent.
    NonIntegerExponent,
    /// A Muirhead ratio was requested over an empty permutation set.
    EmptyPermutationSet,
    /// Direct enumeration is capped to keep the oracle obviously correct.
    EnumerationCap { c: usize, cap: usize },
    /// The cusum subscript admits no component with distinct entries.
    NonContributing,
    /// The two subsets of a cross-product ratio must be disjoint.
    OverlappingSets,
    /// No admissible eliminated-index set exists (`k_J` = 0).
    NoAdmissibleSubsets,
    /// A finite-difference step would break the configuration ordering.
    StepTooLarge,
    /// A polynomial expansion exceeded the stored-monomial cap.
    ExpansionCap { monomials: usize, cap: usize },
    /// Input/output failure while writing results.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OutOfRange(what) => write!(f, "out of range: {what}"),
            Error::NotABijection => write!(f, "mapping is not a bijection"),
            Error::NonIntegerExponent => {
                write!(f, "exact mode requires integer exponents")
            }
            Error::EmptyPermutationSet => write!(f, "empty permutation set"),
            Error::EnumerationCap { c, cap } => {
                write!(f, "direct enumeration capped at c <= {cap}, got c = {c}")
            }
            Error::NonContributing => write!(f, "cusum subscript is not contributing"),
            Error::OverlappingSets => write!(f, "subsets must be disjoint"),
            Error::NoAdmissibleSubsets => write!(f, "no admissible K subsets (k_J = 0)"),
            Error::StepTooLarge => write!(f, "step too large to preserve ordering"),
            Error::ExpansionCap { monomials, cap } => {
                write!(f, "expansion of {monomials} monomials exceeds cap {cap}")
            }
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

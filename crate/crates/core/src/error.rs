use alloc::string::String;

/// Every failure the library can report.
///
/// Variant names map one-to-one onto the machine-readable error names the
/// command line prints; see [`Error::name`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("no embedding of {base} into {ext}")]
    NotAnExtension { base: String, ext: String },
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("variable index {0} out of range")]
    BadIndex(usize),
    #[error("slot subset must be a nonempty proper subset of the slots")]
    BadSubset,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("tensor is not cubical")]
    NotCubical,
    #[error("exact search requires a finite field")]
    InfiniteField,
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("characteristic two is not supported")]
    CharTwoUnsupported,
    #[error("form is not quadratic")]
    NotQuadratic,
    #[error("certificate does not reassemble to its input")]
    NotADecomposition,
    #[error("descent system has no solution over the base field: {0}")]
    Unsolvable(String),
    #[error("interpolation matrix of {0} monomials exceeds the cap")]
    CapExceeded(usize),
    #[error("mined equation does not vanish on a fresh sample")]
    VerificationFailed,
    #[error("n = {0} does not satisfy n^d > m^2 + r(n^(d-1) + n)")]
    NBoundUnmet(u64),
    #[error("inclusion-exclusion and coordinate extraction disagree")]
    IeMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Upper-snake-case identifier, stable across releases.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NON_PRIME",
            Error::ReducibleModulus(_) => "REDUCIBLE_MODULUS",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::DivByZero => "DIV_BY_ZERO",
            Error::FieldMismatch => "FIELD_MISMATCH",
            Error::NotAnExtension { .. } => "NOT_AN_EXTENSION",
            Error::VarMismatch(..) => "VAR_MISMATCH",
            Error::BadIndex(_) => "BAD_INDEX",
            Error::BadSubset => "BAD_SUBSET",
            Error::ShapeMismatch(_) => "SHAPE_MISMATCH",
            Error::NotCubical => "NOT_CUBICAL",
            Error::InfiniteField => "INFINITE_FIELD",
            Error::BudgetExceeded => "BUDGET_EXCEEDED",
            Error::CharTwoUnsupported => "CHAR_TWO_UNSUPPORTED",
            Error::NotQuadratic => "NOT_QUADRATIC",
            Error::NotADecomposition => "NOT_A_DECOMPOSITION",
            Error::Unsolvable(_) => "UNSOLVABLE",
            Error::CapExceeded(_) => "CAP_EXCEEDED",
            Error::VerificationFailed => "VERIFICATION_FAILED",
            Error::NBoundUnmet(_) => "NBOUND_UNMET",
            Error::IeMismatch => "IE_MISMATCH",
            Error::Parse(_) => "PARSE",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("coefficient {0} is not an element of the field")]
    NotInField(String),
    #[error("valuation is indeterminate below horizon {horizon}")]
    IndeterminateValuation { horizon: i64 },
    #[error("precision exhausted at horizon {0}")]
    PrecisionExhausted(i64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("residue vector is not in the tight subspace")]
    NotInTightSubspace,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("indices sum to {got}, expected {expected}")]
    IndexSum { expected: usize, got: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("c(L', L_i) = c(L, L_i) + 1 violated: {0}")]
    ClaimViolated(String),
    #[error("iteration budget of {0} steps exceeded")]
    IterationBudgetExceeded(usize),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("sign queries need the rational field")]
    FieldNotOrdered,
    #[error("basis vector {0} does not lie in its lattice")]
    BasisNotInLattice(String),
    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

use thiserror::Error;

/// Errors raised by the exact-arithmetic engine and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {conductor} exceeds the configured cap {cap}")]
    ConductorCap { conductor: u64, cap: u32 },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("value is not real: {0}")]
    NotReal(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported generator letter `{letter}` for this operation")]
    UnsupportedLetter { letter: String },
    #[error("orbit enumeration stopped at the bound of {bound} points")]
    NotExhausted { bound: usize },
    #[error("permutation degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("group closure exceeded the bound of {bound} elements")]
    ClosureBound { bound: usize },
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("determinant is {0}, expected 1")]
    DeterminantMismatch(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no square root of {0} found inside a cyclotomic field within the extension cap")]
    NoCyclotomicSqrt(String),
    #[error("form is not positive definite (leading minor {minor} is not positive)")]
    NotPositiveDefinite { minor: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search cap reached: {0}")]
    SearchCap(String),
    #[error("coordinate value is not a rational-angle cosine: {0}")]
    Unrecognized(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

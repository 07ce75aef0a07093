use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("too many variables: {0} (at most {max})", max = crate::poly::MAX_VARS)]
    TooManyVariables(usize),
    #[error("exponent out of range")]
    ExponentOverflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("Laurent polynomial has negative exponents")]
    NotPolynomial,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected a nonzero linear form")]
    NotLinear,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("selector out of range: {0}")]
    SelectorOutOfRange(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("invalid partition {partition:?} for l = {l}, m = {m}")]
    InvalidPartition { partition: Vec<u32>, l: usize, m: usize },
    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),
    #[error("function is not symmetric in its variables")]
    NotSymmetric,
    #[error("operator {index} is not a member of the module")]
    NonMember { index: usize },
    #[error("operator {index} is not homogeneous")]
    NonHomogeneous { index: usize },
    #[error("expected {expected} operators, found {found}")]
    WrongOperatorCount { expected: usize, found: usize },
    #[error("operators have mixed orders or dimensions")]
    MixedOrders,
    #[error("image of eta_{index} under {generator} is not a signed eta")]
    NotClosed { generator: String, index: usize },
    #[error("action of {generator} on the eta span differs from its action on V")]
    RepresentationMismatch { generator: String },
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {0} does not fit below 2^31")]
    Overflow(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("requested {size} elements but the field only has {p}")]
    SizeTooLarge { size: usize, p: u64 },
    #[error("geometric ratio is zero mod p")]
    BadRatio,
    #[error("operands live in different fields (p = {0} vs p = {1})")]
    CtxMismatch(u64, u64),
    #[error("bad set literal: {0}")]
    BadSetLiteral(String),
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("repeat count must be at least 1 (byte {offset})")]
    BadRepeat { offset: usize },
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("empty set")]
    EmptySet,
    #[error("dimension {0} outside the supported range 2..=8")]
    DimensionOutOfRange(usize),
    #[error("dimension {0} must be even")]
    OddDimension(usize),
    #[error("invalid experiment configuration: {0}")]
    ConfigInvalid(String),
    #[error("budget exceeded and preset {0} has no certificate fallback")]
    BudgetExceededWithoutCertificate(String),
    #[error("exponent fit needs at least two distinct set sizes")]
    InsufficientData,
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

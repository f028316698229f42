use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot combine elements of Q(sqrt {0}) and Q(sqrt {1})")]
    RingMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-unit: {0}")]
    NonUnit(String),
    #[error("no leading term (zero expression)")]
    NoLeadingTerm,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("degree overflow: {0} + {1} exceeds dimension {2}")]
    DegreeOverflow(usize, usize, usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("contraction of a 0-form")]
    ContractDegreeZero,
    #[error("invalid coframe: {0}")]
    InvalidCoframe(String),
    #[error("metric determinant {0} is not a unit monomial; use the numeric path")]
    NonUnitDeterminant(String),
    #[error("no exact square root of the metric determinant {0}; use the numeric path")]
    NoExactSqrt(String),
    #[error("form is not supported on the metric block: {0}")]
    NotBasic(String),
    #[error("not a positive G2 3-form at sample")]
    NotPositive,
    #[error("{what} residual is nonzero: {residual}")]
    Residual { what: String, residual: String },
    #[error("Lorentz condition violated: {0}")]
    Lorentz(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("flow step rejected at t = {t}: residual {residual:e}")]
    StepRejected { t: f64, residual: f64 },
    #[error("{0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

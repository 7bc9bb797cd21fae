use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("curve parameters do not match")]
    CurveMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("series precision budget exceeded: {0}")]
    Precision(String),
    #[error("no rational {0}-torsion point; choose another prime or pass P0 explicitly")]
    NoTorsion(u32),
    #[error("truncation budget did not stabilize: {0}")]
    Budget(String),
    #[error("falsification finding: {0}")]
    Falsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace {0} deviates from 1")]
    TraceNotUnit(f64),
    #[error("eigenvalue {0:e} is below the negativity tolerance")]
    NegativeEigenvalue(f64),
    #[error("unphysical state parameters: {0}")]
    Unphysical(String),
    #[error("matrix is not an X state: {0}")]
    NotXState(String),
    #[error("Kraus completeness violated by {0:e}")]
    Completeness(f64),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("argument {0} outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("no branch change inside bracket [{0}, {1}]")]
    NoSignChange(f64, f64),
}

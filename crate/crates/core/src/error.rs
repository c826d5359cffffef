use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("no standard genus-3 summand found")]
    NoStandardSummand,
    #[error("axiom violated: {0}")]
    AxiomViolation(String),
    #[error("algebra is not semisimple (S^2 != id)")]
    NonSemisimple,
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("bracket of the standard genus-3 diagram vanishes; the invariant is undefined")]
    StabilizationObstruction,
    #[error("contraction exceeds the size cap (planned peak {peak} entries, cap {cap})")]
    ResourceExceeded { peak: u128, cap: u128 },
    #[error("missing data: {0}")]
    Missing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

/// Errors raised by the optimizers, problems and statistics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid bounds in dimension {dim}: lower {lower} must be below upper {upper}")]
    InvalidBounds { dim: usize, lower: f64, upper: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("fitness of member {0} read before evaluation")]
    Unevaluated(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("incomplete lookup table: {0}")]
    IncompleteTable(String),

    #[error("{}", match .line { Some(l) => format!("line {l}: {msg}"), None => msg.clone() })]
    Parse { line: Option<usize>, msg: String },

    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

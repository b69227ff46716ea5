use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("degenerate basis: rows are linearly dependent")]
    DegenerateBasis,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("radius cap exceeded: {nodes} nodes at level {level} (squared radius {radius_sq})")]
    RadiusCapExceeded {
        level: usize,
        nodes: u64,
        radius_sq: String,
    },
    #[error("chart degenerate: pairwise angle at 0 or pi")]
    ChartDegenerate,
    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },
    #[error("zero variance")]
    ZeroVariance,
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("instance too large for exhaustive search: {size} points exceeds the cap of {cap}")]
    SizeLimit { size: usize, cap: usize },

    #[error("{name} = {value} is out of range; must satisfy {constraint}")]
    OutOfRange { name: &'static str, value: f64, constraint: String },

    #[error("point is not strictly inside the triangle")]
    NotInterior,

    #[error("witness construction failed: {0}")]
    ConstructionFailure(String),

    #[error("sampler starved: accepted {accepted} of {attempted} attempts")]
    SamplerStarvation { accepted: u64, attempted: u64 },

    #[error("construction check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

use thiserror::Error;

use crate::model::Violation;
use crate::relaxation::LpSolution;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<Violation>),
    #[error("infeasible schedule: {0}")]
    InfeasibleSchedule(String),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("LP subsolver failure: {0}")]
    SubsolverFailure(String),
    #[error("cutting-plane loop hit the limit of {limit} cuts")]
    IterationLimit { limit: usize, best: Box<LpSolution> },
    #[error("instance with {size} jobs exceeds the enumeration cap of {cap}")]
    InstanceTooLarge { size: usize, cap: usize },
    #[error("job {job} has release time > 0 on cluster {cluster}; only r = 0 is supported")]
    ReleaseTimesUnsupported { job: usize, cluster: usize },
    #[error("instance is not fully parallelizable: {0}")]
    NotFps(String),
    #[error("eps must satisfy 0 < eps < 1/L")]
    BadEpsilon,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::ids::{AgentId, ApplicantId, PositionId};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid value-model parameters: {0}")]
    InvalidParameters(String),

    #[error("agent {agent} is out of range for a market with {n} applicants and {m} positions")]
    OutOfRange { agent: AgentId, n: usize, m: usize },

    #[error("{viewer} and {target} are on the same side of the market")]
    SameSide { viewer: AgentId, target: AgentId },

    #[error("{0} and {1} have already interviewed")]
    DuplicateInterview(ApplicantId, PositionId),

    #[error("{0} and {1} have not interviewed")]
    NotInterviewed(ApplicantId, PositionId),

    #[error("fixed value matrices carry no realized value for ({0}, {1})")]
    MissingFixedValue(ApplicantId, PositionId),

    #[error("inconsistent state: {0}")]
    InconsistentState(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

use crate::identity::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("mass values sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("lineage {0} refers to an identity that was never issued")]
    UnknownLineage(AgentId),

    #[error("agent {0} cannot recommend itself")]
    SelfRecommendation(AgentId),

    #[error("total conflict between evidence sources (normalizer {0:e})")]
    TotalConflict(f64),

    #[error("no evidence to combine")]
    EmptyEvidence,

    #[error("advisor {0} recommended more than once in a single request")]
    DuplicateRecommendation(AgentId),

    #[error("inquiry budget of {asker} toward {provider} is exhausted")]
    BudgetExhausted { asker: AgentId, provider: AgentId },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("expected {expected} features, got {actual}")]
    SchemaMismatch { expected: usize, actual: usize },

    #[error("request for {subject} has no eligible advisors")]
    NoEligibleAdvisors { subject: AgentId },

    #[error("request is malformed: {0}")]
    InvalidRequest(String),

    #[error("advisor {0} is not part of the population")]
    UnknownAdvisor(AgentId),

    #[error("round for subject {subject} failed after polling {responders} responders: {source}")]
    RoundFailed {
        subject: AgentId,
        responders: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration `{key}`: {reason}")]
    InvalidConfig { key: &'static str, reason: String },

    #[error("{path}: {reason}")]
    Ingest { path: PathBuf, reason: String },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

use crate::cluster::Violation;
use crate::field::{FieldError, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("invalid forest: {}", render_violations(.0))]
    InvalidForest(Vec<Violation>),
    #[error("negative weight at {0}")]
    NegativeWeight(String),
    #[error("weighted cluster is not consistent (negative excess at {0})")]
    InconsistentCluster(String),
    #[error("empty cluster")]
    EmptyCluster,
    #[error("clusters disagree on the structure of node {0}")]
    IncompatibleForests(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("germ is not reduced (repeated factor {0})")]
    NonReducedGerm(String),
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("invalid map germ: {0}")]
    InvalidMap(String),
    #[error("blowup budget of {levels} levels exceeded ({partial} points resolved)")]
    BudgetExceeded { levels: usize, partial: usize },
    #[error("no certified pair of curves after {attempts} attempts: {last}")]
    RetryBudgetExceeded { attempts: usize, last: String },
    #[error("map contracts the curve {0}")]
    ContractedCurvePresent(String),
    #[error("placement conflict: {0}")]
    PlacementConflict(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable error name, printed by the command-line tool.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Field(FieldError::DivisionByZero) => "DivisionByZero",
            Error::Field(FieldError::ModulusSplit { .. }) => "ModulusSplit",
            Error::Field(FieldError::InvalidTower(_)) => "InvalidTower",
            Error::Format(_) => "FormatError",
            Error::InvalidForest(_) => "InvalidForest",
            Error::NegativeWeight(_) => "NegativeWeight",
            Error::InconsistentCluster(_) => "InconsistentCluster",
            Error::EmptyCluster => "EmptyCluster",
            Error::IncompatibleForests(_) => "IncompatibleForests",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NonReducedGerm(_) => "NonReducedGerm",
            Error::InvalidGerm(_) => "InvalidGerm",
            Error::InvalidMap(_) => "InvalidMap",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::RetryBudgetExceeded { .. } => "RetryBudgetExceeded",
            Error::ContractedCurvePresent(_) => "ContractedCurvePresent",
            Error::PlacementConflict(_) => "PlacementConflict",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::report::Issue;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {}", render(.0))]
    Structural(Vec<Issue>),
    #[error("pair ({0}, {1}) is not parallel")]
    NonParallel(String, String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("enumeration budget of {budget} exceeded (naive bound {required})")]
    BudgetExceeded { budget: u64, required: String },
    #[error("invalid factorization data: {0}")]
    Factorization(String),
    #[error("model rejected: {0}")]
    ModelRejected(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::NonParallel(..) => "non_parallel",
            Error::CapExceeded(_) => "cap_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Factorization(_) => "factorization",
            Error::ModelRejected(_) => "model_rejected",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "parse",
        }
    }
}

fn render(issues: &[Issue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::constructors::ApproxCertificate;
use crate::dirichlet::ReturnSequence;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: wrong element kind, violated precondition, malformed parameters.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("capacity error: degree {needed} exceeds degree cap {cap}")]
    Capacity { needed: usize, cap: usize },

    /// A return-time stage found nothing below `n_max`.
    #[error("return-time search exhausted at stage {stage} (eps {eps:e}, n_max {n_max}); {} indices found", partial.indices.len())]
    ReturnsExhausted {
        partial: ReturnSequence,
        stage: usize,
        eps: f64,
        n_max: u64,
    },

    /// No certificate within the index budget; `best` is the closest attempt.
    #[error("budget {budget} exhausted: {detail}")]
    BudgetExhausted {
        best: Option<Box<ApproxCertificate>>,
        budget: u64,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

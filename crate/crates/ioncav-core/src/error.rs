use thiserror::Error;

/// Errors shared by every module of the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coherent / squeezed amplitude does not fit in the requested
    /// truncated space. `required` is the smallest cutoff that would.
    #[error("truncation budget exceeded: need cutoff >= {required}, have {have}")]
    TruncationBudget { required: usize, have: usize },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("empty measurement branch: probability {prob:.3e} below threshold")]
    EmptyBranch { prob: f64 },

    #[error("operands live on different Hilbert spaces: {0}")]
    SpecMismatch(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

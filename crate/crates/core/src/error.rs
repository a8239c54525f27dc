use thiserror::Error;

/// Errors shared by every subsystem.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a stated precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A map was evaluated outside its tabulated/defined domain.
    #[error("map undefined at {0}")]
    UndefinedAt(f64),
    /// An embedding sent two distinct points to the same image.
    #[error("embedding collapses a pair ({0}, {1})")]
    CollapsedPair(String, String),
    /// An enumeration or grid exceeded the configured budget.
    #[error("budget exceeded: {0} evaluations required, limit {1}")]
    BudgetExceeded(u128, u128),
    /// A ratio whose denominator vanished.
    #[error("degenerate denominator: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

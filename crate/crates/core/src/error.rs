use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A counted search ran out of node expansions. `best_size` is the size of
    /// the best solution seen before stopping, when the search tracks one.
    #[error("search budget of {budget} node expansions exceeded (best so far: {best_size:?})")]
    BudgetExceeded {
        budget: u64,
        best_size: Option<usize>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

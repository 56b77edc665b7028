use std::path::PathBuf;

/// Errors raised while building, persisting or loading an [`NgramIndex`].
///
/// [`NgramIndex`]: crate::store::NgramIndex
#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to read corpus: {0}")]
    Input(#[source] std::io::Error),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {reason}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        reason: String,
    },
}

/// Errors surfaced by an n-gram lookup backend. A backend never reports a
/// failed lookup as a zero count.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    /// The query itself is invalid (e.g. longer than the index's max order).
    #[error("invalid query: {0}")]
    Query(String),

    /// The backend could not be reached or did not answer in time.
    #[error("backend unavailable: {0}")]
    Transport(String),

    /// The backend answered with something that is not a valid response.
    #[error("bad backend response: {0}")]
    Protocol(String),
}

use std::path::PathBuf;

/// Errors raised by the model, the solvers and climate ingestion.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the physical domain of a correlation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value violates a type invariant.
    #[error("invalid {field}: {reason}")]
    Config { field: &'static str, reason: String },

    /// A pivot of a linear solve vanished or became non-finite.
    #[error("singular system at node {node} ({label})")]
    Singular { node: usize, label: &'static str },

    /// The gap has no through-flow where one is required.
    #[error("gap flow error: {0}")]
    Flow(String),

    /// The climate series is malformed or does not cover the request.
    #[error("climate error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Climate { line: Option<u64>, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn climate(line: Option<u64>, message: impl Into<String>) -> Self {
        Error::Climate {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

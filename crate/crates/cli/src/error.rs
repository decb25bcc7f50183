use std::path::PathBuf;
use std::process::ExitCode;

/// Failure of a command, classified by the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{0}")]
    Numerical(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Numerical(_) => ExitCode::from(2),
            CliError::Io { .. } => ExitCode::from(3),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Classifies an error raised while loading inputs.
    pub fn from_input(err: trombe_core::Error) -> Self {
        use trombe_core::Error as E;
        match err {
            E::Io { path, source } => CliError::Io { path, source },
            other => CliError::Validation(other.to_string()),
        }
    }

    /// Classifies an error raised by the solver.
    pub fn from_solver(err: trombe_core::Error) -> Self {
        use trombe_core::Error as E;
        match err {
            E::Io { path, source } => CliError::Io { path, source },
            e @ (E::Config { .. } | E::Climate { .. }) => CliError::Validation(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

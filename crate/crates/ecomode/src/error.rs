use std::path::PathBuf;

/// Crate-wide error type.
///
/// The CLI maps variants onto exit codes: configuration and usage problems
/// exit with status 2, everything else (domain failures, runtime I/O) with
/// status 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration: invalid flag values, unreadable config/input
    /// files, inconsistent schedules.
    #[error("config error: {0}")]
    Config(String),

    /// I/O failure while reading or writing data mid-run.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Mode inference could not produce a total, unambiguous mapping.
    #[error("mode inference failed: {0}")]
    Inference(String),

    /// An optimization instance could not be built or is malformed.
    #[error("invalid instance: {0}")]
    Instance(String),

    /// Nothing to optimize or aggregate over.
    #[error("empty simulation: no sessions")]
    EmptySimulation,

    /// The exhaustive oracle refused a search space over its guard.
    #[error("oracle refused: {0}")]
    OracleGuard(String),

    /// Any other diagnosed domain failure.
    #[error("{0}")]
    Domain(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 2 for usage/config problems,
    /// 1 for diagnosed domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

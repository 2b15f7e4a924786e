use std::path::{Path, PathBuf};

use errata_core::agreement::AgreementError;
use errata_core::collection::CollectionError;
use errata_core::detect::{EvalError, ScoreFileError};
use errata_core::facts::{FactAlgebraError, FixtureErrors};
use errata_core::NotMeasurable;
use errata_service::{ConfigError, ServiceError, StartError};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const PARSE: i32 = 4;
    pub const VIOLATIONS: i32 = 5;
    pub const NOT_MEASURABLE: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Violations(String),
    #[error("not measurable: {0}")]
    NotMeasurable(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Parse(_) => exit::PARSE,
            CliError::Violations(_) => exit::VIOLATIONS,
            CliError::NotMeasurable(_) => exit::NOT_MEASURABLE,
            CliError::Failure(_) => exit::FAILURE,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn collection(path: &Path, e: CollectionError) -> CliError {
        match e {
            CollectionError::Io(source) => CliError::io(path, source),
            e @ CollectionError::Parse(_) => CliError::Parse(format!("{}: {e}", path.display())),
            e @ CollectionError::Invalid(_) => {
                CliError::Violations(format!("{}: {e}", path.display()))
            }
        }
    }

    pub fn scores(path: &Path, e: ScoreFileError) -> CliError {
        match e {
            ScoreFileError::Io(source) => CliError::io(path, source),
            e @ ScoreFileError::Parse(_) => CliError::Parse(format!("{}: {e}", path.display())),
        }
    }

    pub fn fixture(path: &Path, e: FixtureErrors) -> CliError {
        let lines: Vec<String> = e.0.iter().map(|x| format!("  {x}")).collect();
        CliError::Parse(format!("{}:\n{}", path.display(), lines.join("\n")))
    }
}

impl From<NotMeasurable> for CliError {
    fn from(e: NotMeasurable) -> Self {
        CliError::NotMeasurable(e.reason)
    }
}

impl From<AgreementError> for CliError {
    fn from(e: AgreementError) -> Self {
        match e {
            AgreementError::NotMeasurable(n) => n.into(),
            AgreementError::TooFewRaters(_) => CliError::NotMeasurable(e.to_string()),
            e => CliError::Failure(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Unmatched { .. } => CliError::Parse(e.to_string()),
            EvalError::Empty => CliError::NotMeasurable(e.to_string()),
            e @ EvalError::Metric { .. } => CliError::Failure(e.to_string()),
        }
    }
}

impl From<FactAlgebraError> for CliError {
    fn from(e: FactAlgebraError) -> Self {
        CliError::Violations(e.to_string())
    }
}

impl From<StartError> for CliError {
    fn from(e: StartError) -> Self {
        match e {
            StartError::Config(ConfigError::Io { path, source }) => CliError::Io { path, source },
            StartError::Items {
                path,
                source: errata_service::ItemsError::Io(source),
            } => CliError::Io { path, source },
            StartError::Service(ServiceError::Log(errata_service::log::LogError::Io {
                path,
                source,
            })) => CliError::Io { path, source },
            e => CliError::Parse(e.to_string()),
        }
    }
}

//! CLI errors with stable machine-parseable codes, printed as one line:
//! `error[E_CODE]: message`.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("reference values not found at {0}; run `emoa reference --config <file>` first")]
    MissingReference(PathBuf),

    #[error("no reference row for problem {0}; re-run `emoa reference` for this suite")]
    MissingReferenceRow(String),

    #[error("aggregation mixes dimensions {0:?}; ECDFs are per-dimension, pass --dim")]
    MixedDimensions(Vec<usize>),

    #[error("scatter needs 2-D parents, got dimension {0}")]
    NotPlanar(usize),

    #[error("required trace missing: {0}")]
    MissingTrace(PathBuf),

    #[error("archive indicator increased in {0}")]
    Monotonicity(String),

    #[error("nothing selected: {0}")]
    EmptySelection(String),

    #[error("unknown problem id {0}")]
    UnknownProblem(String),

    #[error(transparent)]
    Engine(#[from] emoa::ConfigError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Config(_) | CliError::Engine(_) => "E_CONFIG",
            CliError::Io { .. } => "E_IO",
            CliError::MissingReference(_) | CliError::MissingReferenceRow(_) => "E_NO_REFERENCE",
            CliError::MixedDimensions(_) => "E_MIXED_DIMS",
            CliError::NotPlanar(_) => "E_DIMENSION",
            CliError::MissingTrace(_) => "E_MISSING_TRACE",
            CliError::Monotonicity(_) => "E_MONOTONICITY",
            CliError::EmptySelection(_) => "E_EMPTY_SELECTION",
            CliError::UnknownProblem(_) => "E_UNKNOWN_PROBLEM",
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

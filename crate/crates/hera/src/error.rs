use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, DataError>;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("dataset has no ground truth")]
    MissingGroundTruth,
    #[error("cannot add {r} false labels with only {q} labels")]
    RTooLarge { r: usize, q: usize },
    #[error("cannot split {n} instances into {folds} folds")]
    BadFoldCount { folds: usize, n: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] hera_core::Error),
}

impl DataError {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        DataError::Parse { line, reason: reason.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DataError::Io { path: path.into(), source }
    }
}

impl DataError {
    /// Process exit status: 2 usage, 3 data, 4 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            DataError::Model(e) => match e.root() {
                hera_core::Error::SvdFailure | hera_core::Error::NonFiniteIterate(_) => 4,
                hera_core::Error::InvalidHyperparameter { .. } | hera_core::Error::KTooLarge { .. } => 2,
                _ => 3,
            },
            DataError::Invalid(_) | DataError::BadFoldCount { .. } | DataError::RTooLarge { .. } => 2,
            DataError::Parse { .. } | DataError::Io { .. } | DataError::MissingGroundTruth => 3,
        }
    }
}

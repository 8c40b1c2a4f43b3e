use alloc::boxed::Box;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("instance {column} has an empty candidate set")]
    EmptyCandidateSet { column: usize },
    #[error("ground-truth label of instance {column} is not among its candidates")]
    TruthNotInCandidates { column: usize },
    #[error("ground-truth label {label} of instance {column} is out of range")]
    LabelOutOfRange { column: usize, label: usize },
    #[error("candidate matrix entry ({row}, {column}) is neither 0 nor 1")]
    NonBinaryCandidate { row: usize, column: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("invalid hyperparameter `{name}`: {reason}")]
    InvalidHyperparameter { name: &'static str, reason: &'static str },
    #[error("threshold must be nonnegative, got {0}")]
    NegativeThreshold(f64),
    #[error("singular value decomposition did not converge")]
    SvdFailure,
    #[error("non-finite iterate while updating {0}")]
    NonFiniteIterate(&'static str),
    #[error("all points of the neighborhood coincide")]
    DegenerateNeighborhood,
    #[error("k = {k} neighbors requested from {n} training instances")]
    KTooLarge { k: usize, n: usize },
    #[error("outer iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any iteration context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtIteration { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Error {
        Error::AtIteration { iteration, source: Box::new(self) }
    }
}

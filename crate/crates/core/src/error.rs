use thiserror::Error;

/// Points implicated in a general-position failure.
///
/// `ids` are indices into the data set; `query` is set when the query point
/// is involved and `synthetic` when an auxiliary vertex (a vertex of a
/// query simplex, or the pinned origin) is involved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub ids: Vec<usize>,
    pub query: bool,
    pub synthetic: bool,
}

impl Witness {
    pub fn data(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Self { ids, query: false, synthetic: false }
    }

    pub fn none() -> Self {
        Self::default()
    }

    /// True when the witness involves only input points (data and query),
    /// so the degeneracy is a property of the instance itself.
    pub fn is_intrinsic(&self) -> bool {
        !self.synthetic
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("hyperplane has an all-zero normal")]
    ZeroNormal,

    #[error("degenerate input: {reason}")]
    DegenerateInput { reason: String, witness: Witness },

    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("unsupported dimension {0}")]
    UnsupportedDim(usize),

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),

    #[error("no candidate in range")]
    EmptyRange,

    #[error("ordered count {total} is not divisible by {multiplicity}")]
    NonDivisibleCount { total: u64, multiplicity: u64 },

    #[error("point {id} lies on the splitting hyperplane")]
    OnHyperplane { id: usize },

    #[error("cutting construction failed after {retries} retries")]
    CuttingFailure { retries: usize },

    #[error("enumeration of {needed} candidates exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("polytope certificate failed: {0}")]
    Certificate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn degenerate(reason: impl Into<String>, witness: Witness) -> Self {
        Error::DegenerateInput { reason: reason.into(), witness }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateInput { .. } | Error::OnHyperplane { .. } | Error::NonDivisibleCount { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

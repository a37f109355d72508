use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by pointwise functionals, constructions and scans.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is outside the open unit disk")]
    Domain(Complex64),

    #[error("branch point at {0}: the analytic part has a vanishing derivative or value")]
    BranchPoint(Complex64),

    #[error("singularity at {0}: |ω| reached 1")]
    Singularity(Complex64),

    #[error("critical point at {0}: h' vanishes")]
    CriticalPoint(Complex64),

    #[error("non-finite value at {0}")]
    Evaluation(Complex64),

    #[error("not a self-map of the disk: |ω({0})| >= 1")]
    NotSelfMap(Complex64),

    #[error("mapping is not sense-preserving at {0}")]
    NotSensePreserving(Complex64),

    #[error("every sample of the scan failed")]
    EmptyScan,

    #[error("scan aborted: {failed} of {total} samples failed")]
    ScanAborted { failed: usize, total: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    /// Pointwise failures that a supremum scan may skip and count.
    pub fn is_pointwise(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::BranchPoint(_)
                | Error::Singularity(_)
                | Error::Evaluation(_)
                | Error::NotSensePreserving(_)
        )
    }
}

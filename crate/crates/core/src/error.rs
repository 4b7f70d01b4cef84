use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points {first} and {second} coincide (distance below {threshold:e})")]
    DuplicatePoints {
        first: usize,
        second: usize,
        threshold: f64,
    },

    #[error(
        "Gram matrix of size {size} is not numerically positive definite \
         (largest jitter tried: {jitter:e}); pass --jitter auto or --jitter <lambda> to regularize"
    )]
    NotPositiveDefinite { size: usize, jitter: f64 },

    #[error("interpolation residual {residual:e} exceeds tolerance {tolerance:e}")]
    InterpolationResidual { residual: f64, tolerance: f64 },

    #[error("all sampled kernel increments are zero; the kernel is numerically constant")]
    DegenerateKernel,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("requested {requested} points but the evaluation grid only admits {capacity}")]
    GridCapacity { requested: usize, capacity: usize },

    #[error("excluded ball covers the whole domain")]
    BallCoversDomain,

    #[error("rejection sampling gave up after {attempts} draws")]
    SamplingExhausted { attempts: usize },

    #[error("kernel combinations use different kernels")]
    KernelMismatch,

    #[error("need at least {required} usable records, found {found}")]
    TooFewRecords { required: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

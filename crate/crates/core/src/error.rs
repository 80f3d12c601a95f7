use thiserror::Error;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands are defined on different frames ({left} vs {right})")]
    FrameMismatch { left: String, right: String },

    #[error("membership vector has length {got}, frame has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },

    #[error("membership grade {0} is outside [0, 1]")]
    InvalidGrade(f64),

    #[error("alpha level {0} is outside (0, 1]")]
    InvalidAlpha(f64),

    #[error("significance level {0} must lie strictly between 0 and 1")]
    InvalidSignificance(f64),

    #[error("total conflict: normalizing constant is zero")]
    TotalConflict,

    #[error("fuzzy set is not normal (height {0})")]
    NotNormal(f64),

    #[error("expected a crisp set")]
    NotCrisp,

    #[error("expected a Bayesian mass function")]
    NotBayesian,

    #[error("guaranteed possibility of the empty event is undefined")]
    EmptyEvent,

    #[error("focal set is empty")]
    EmptyFocalSet,

    #[error("mass {0} is not in (0, 1]")]
    InvalidMass(f64),

    #[error("masses sum to {0}, expected 1")]
    MassSum(f64),

    #[error("mass function has no focal sets")]
    NoFocalSets,

    #[error("frame must contain at least one element")]
    EmptyFrame,

    #[error("duplicate frame label `{0}`")]
    DuplicateLabel(String),

    #[error("element index {index} out of range for frame of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("{what} = {value} exceeds the supported maximum {max}")]
    TooLarge { what: &'static str, value: usize, max: usize },

    #[error("likelihood is identically zero for this outcome")]
    ZeroLikelihood,

    #[error("normalizing constant is zero")]
    ZeroNormalizer,

    #[error("outcome {outcome} is outside the sample space of size {size}")]
    InvalidOutcome { outcome: usize, size: usize },

    #[error("parameter value {0} is not a point of the parameter grid")]
    NotOnGrid(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

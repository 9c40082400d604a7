use thiserror::Error;

/// Errors raised by estimation, sampling and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("edge probability overflow: rho * sup f = {value} exceeds 1")]
    ProbabilityOverflow { value: f64 },

    #[error("distance estimation needs at least two layers, got {0}")]
    NeedsMultipleLayers(usize),

    #[error("collection has no edges (estimated density is zero)")]
    EmptyCollection,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error("scenario conflict: {0}")]
    ScenarioConflict(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

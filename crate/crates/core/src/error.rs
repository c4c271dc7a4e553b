use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("count {k} exceeds the number of trials {n}")]
    CountExceedsTrials { k: u64, n: u64 },

    #[error("truncation eps = {0} must lie in (0, 1e-6]")]
    InvalidEps(f64),

    #[error("beta parameters must be positive and finite (alpha = {alpha}, beta = {beta})")]
    InvalidBeta { alpha: f64, beta: f64 },

    #[error("Poisson rate must be finite and nonnegative, got {0}")]
    InvalidRate(f64),

    #[error("coverage {0} must lie strictly between 0 and 1")]
    InvalidCoverage(f64),

    #[error("population size {0} is outside 1..=4294967295")]
    InvalidPopulation(u64),

    #[error("target spread ratio {target} is unreachable; ratio at the lowest concentration is {at_lowest}")]
    CalibrationUnreachable { target: f64, at_lowest: f64 },

    #[error("plug-in interval has zero width; spread ratio undefined")]
    ZeroPluginWidth,

    #[error("no covariate named `{0}`")]
    UnknownCovariate(String),

    #[error("covariate `{0}` does not separate the groups")]
    NotSeparating(String),

    #[error("invalid cohort spec: {0}")]
    InvalidSpec(String),

    #[error("invalid scenario file: {field}: {message}")]
    Scenario { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Count-outcome comparisons between exposed and unexposed populations.

pub mod classical;
pub mod cohort;
pub mod comparison;
pub mod distributions;
pub mod error;
pub mod figure;
pub mod predictive;
pub mod probability;
pub mod scenario;
pub mod special;

pub use error::{Error, Result};
pub use probability::{BetaParams, Probability};

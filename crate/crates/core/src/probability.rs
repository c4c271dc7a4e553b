use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A probability in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("probability", value)
    }

    /// Like [`Probability::new`] but reports `name` on failure.
    pub fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::InvalidProbability { name, value })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Conjugate beta pseudo-counts on a per-person probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBeta", into = "RawBeta")]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBeta {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawBeta> for BetaParams {
    type Error = Error;

    fn try_from(raw: RawBeta) -> Result<Self> {
        BetaParams::new(raw.alpha, raw.beta)
    }
}

impl From<BetaParams> for RawBeta {
    fn from(b: BetaParams) -> RawBeta {
        RawBeta { alpha: b.alpha, beta: b.beta }
    }
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(alpha) && ok(beta) {
            Ok(BetaParams { alpha, beta })
        } else {
            Err(Error::InvalidBeta { alpha, beta })
        }
    }

    /// Parameters with the given mean and concentration `alpha + beta`.
    pub fn from_mean_concentration(mean: Probability, concentration: f64) -> Result<Self> {
        let m = mean.value();
        BetaParams::new(m * concentration, (1.0 - m) * concentration)
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn concentration(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }
}

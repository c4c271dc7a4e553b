//! Pooled two-proportion score test and the relative-risk point estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::Probability;
use crate::special::normal_two_sided;

/// Case counts out of group sizes for two groups `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoByTwo {
    pub cases_a: u64,
    pub n_a: u64,
    pub cases_b: u64,
    pub n_b: u64,
}

impl TwoByTwo {
    pub fn new(cases_a: u64, n_a: u64, cases_b: u64, n_b: u64) -> Result<Self> {
        for (cases, n) in [(cases_a, n_a), (cases_b, n_b)] {
            if n == 0 {
                return Err(Error::InvalidSpec("group size must be at least 1".into()));
            }
            if cases > n {
                return Err(Error::CountExceedsTrials { k: cases, n });
            }
        }
        Ok(TwoByTwo { cases_a, n_a, cases_b, n_b })
    }

    pub fn swapped(&self) -> TwoByTwo {
        TwoByTwo { cases_a: self.cases_b, n_a: self.n_b, cases_b: self.cases_a, n_b: self.n_a }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: Probability,
    pub alpha: Probability,
    pub reject: bool,
}

/// Two-sided pooled score test of equal proportions.
///
/// With `continuity_correction` the absolute difference of proportions is
/// reduced by `(1/n_a + 1/n_b) / 2`, floored at zero.
pub fn two_proportion_test(t: &TwoByTwo, continuity_correction: bool, alpha: Probability) -> TestResult {
    let (na, nb) = (t.n_a as f64, t.n_b as f64);
    let pooled = (t.cases_a + t.cases_b) as f64 / (na + nb);
    if pooled == 0.0 || pooled == 1.0 {
        return TestResult { statistic: 0.0, p_value: Probability::ONE, alpha, reject: false };
    }
    let inv = 1.0 / na + 1.0 / nb;
    let diff = t.cases_a as f64 / na - t.cases_b as f64 / nb;
    let correction = if continuity_correction { inv / 2.0 } else { 0.0 };
    let magnitude = (diff.abs() - correction).max(0.0);
    let se = (pooled * (1.0 - pooled) * inv).sqrt();
    let statistic = if diff < 0.0 { -magnitude / se } else { magnitude / se };
    let p_value = Probability::new(normal_two_sided(statistic).min(1.0)).expect("tail in [0,1]");
    TestResult { statistic, p_value, alpha, reject: p_value.value() < alpha.value() }
}

/// `(cases_a / n_a) / (cases_b / n_b)`; `None` when group `b` has no cases.
pub fn relative_risk_estimate(t: &TwoByTwo) -> Option<f64> {
    (t.cases_b > 0).then(|| (t.cases_a as f64 / t.n_a as f64) / (t.cases_b as f64 / t.n_b as f64))
}

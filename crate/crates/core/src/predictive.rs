//! Parameter uncertainty through conjugate beta priors.
//!
//! Each arm's count becomes a beta-binomial posterior predictive; comparisons
//! reuse [`crate::comparison`] unchanged.

use serde::{Deserialize, Serialize};

use crate::comparison::{check_population, exceedance, Exceedance, ExposureScenario};
use crate::distributions::{
    beta_binomial_distribution, binomial_distribution, check_coverage, convolve, CountDistribution,
};
use crate::error::{Error, Result};
use crate::probability::{BetaParams, Probability};

/// Concentration (`alpha + beta`) search range for [`calibrate_prior`].
pub const CONCENTRATION_BOUNDS: (f64, f64) = (10.0, 1e12);
pub const CALIBRATION_TOLERANCE: f64 = 0.01;
pub const CALIBRATION_MAX_ITER: usize = 200;

/// Conjugate update of a beta prior with binomial data.
pub fn posterior_update(prior: BetaParams, successes: u64, trials: u64) -> Result<BetaParams> {
    if successes > trials {
        return Err(Error::CountExceedsTrials { k: successes, n: trials });
    }
    BetaParams::new(prior.alpha() + successes as f64, prior.beta() + (trials - successes) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertainScenario {
    pub n_exposed: u64,
    pub n_unexposed: u64,
    pub prior_exposed: BetaParams,
    pub prior_unexposed: BetaParams,
}

impl UncertainScenario {
    pub fn validate(&self) -> Result<()> {
        check_population(self.n_exposed)?;
        check_population(self.n_unexposed)
    }

    /// The scenario with both priors collapsed to their means.
    pub fn plug_in(&self) -> Result<ExposureScenario> {
        ExposureScenario::new(
            self.n_exposed,
            self.n_unexposed,
            Probability::named("prior_exposed mean", self.prior_exposed.mean())?,
            Probability::named("prior_unexposed mean", self.prior_unexposed.mean())?,
        )
    }

    /// Calibrates each arm of `s` independently to the same spread ratio.
    pub fn calibrated(
        s: &ExposureScenario,
        target_ratio: f64,
        coverage: Probability,
        eps: f64,
    ) -> Result<(UncertainScenario, Calibration, Calibration)> {
        s.validate()?;
        let exposed = calibrate_prior(s.n_exposed, s.p_exposed, target_ratio, coverage, eps)?;
        let unexposed = calibrate_prior(s.n_unexposed, s.p_unexposed, target_ratio, coverage, eps)?;
        let u = UncertainScenario {
            n_exposed: s.n_exposed,
            n_unexposed: s.n_unexposed,
            prior_exposed: exposed.prior,
            prior_unexposed: unexposed.prior,
        };
        Ok((u, exposed, unexposed))
    }

    pub fn spread_reports(&self, coverage: Probability, eps: f64) -> Result<(SpreadReport, SpreadReport)> {
        Ok((
            spread_report(self.n_exposed, self.prior_exposed, coverage, eps)?,
            spread_report(self.n_unexposed, self.prior_unexposed, coverage, eps)?,
        ))
    }
}

/// `(exposed, unexposed)` posterior predictive count distributions.
pub fn predictive_arms(u: &UncertainScenario, eps: f64) -> Result<(CountDistribution, CountDistribution)> {
    u.validate()?;
    Ok((
        beta_binomial_distribution(u.n_exposed, u.prior_exposed, eps)?,
        beta_binomial_distribution(u.n_unexposed, u.prior_unexposed, eps)?,
    ))
}

pub fn predictive_exceedance(u: &UncertainScenario, eps: f64) -> Result<Exceedance> {
    let (e, n) = predictive_arms(u, eps)?;
    Ok(exceedance(&e, &n))
}

/// `(split total, all-low total)` under parameter uncertainty. The all-low
/// population shares the unexposed arm's prior.
pub fn predictive_split_and_all_low(u: &UncertainScenario, eps: f64) -> Result<(CountDistribution, CountDistribution)> {
    let (e, n) = predictive_arms(u, eps)?;
    let split = convolve(&e, &n, eps)?;
    let all_low = beta_binomial_distribution(u.n_exposed + u.n_unexposed, u.prior_unexposed, eps)?;
    Ok((split, all_low))
}

/// Interval widths of the predictive and plug-in laws for one arm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpreadReport {
    pub width_predictive: u64,
    pub width_plugin: u64,
    pub ratio: f64,
}

pub fn spread_report(n: u64, prior: BetaParams, coverage: Probability, eps: f64) -> Result<SpreadReport> {
    check_coverage(coverage)?;
    let plug = binomial_distribution(n, Probability::new(prior.mean())?, eps)?;
    let width_plugin = plug.central_interval(coverage)?.width();
    if width_plugin == 0 {
        return Err(Error::ZeroPluginWidth);
    }
    let pred = beta_binomial_distribution(n, prior, eps)?;
    let width_predictive = pred.central_interval(coverage)?.width();
    Ok(SpreadReport { width_predictive, width_plugin, ratio: width_predictive as f64 / width_plugin as f64 })
}

/// Outcome of [`calibrate_prior`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub prior: BetaParams,
    pub ratio: f64,
    pub target_ratio: f64,
    /// The target is met without parameter uncertainty; the prior sits at the
    /// upper concentration bound.
    pub degenerate: bool,
    pub iterations: usize,
}

/// Finds the beta prior with mean `p_mean` whose predictive interval is
/// `target_ratio` times the plug-in width, by bisection on `ln(alpha + beta)`.
///
/// When integer widths make the tolerance unattainable the closest bracketed
/// concentration is returned with its achieved ratio.
pub fn calibrate_prior(
    n: u64,
    p_mean: Probability,
    target_ratio: f64,
    coverage: Probability,
    eps: f64,
) -> Result<Calibration> {
    check_coverage(coverage)?;
    let ratio_at = |c: f64| -> Result<(BetaParams, f64)> {
        let prior = BetaParams::from_mean_concentration(p_mean, c)?;
        Ok((prior, spread_report(n, prior, coverage, eps)?.ratio))
    };
    let (lo_bound, hi_bound) = (CONCENTRATION_BOUNDS.0.ln(), CONCENTRATION_BOUNDS.1.ln());

    let (prior_max, ratio_max) = ratio_at(CONCENTRATION_BOUNDS.1)?;
    if ratio_max >= target_ratio - CALIBRATION_TOLERANCE {
        return Ok(Calibration { prior: prior_max, ratio: ratio_max, target_ratio, degenerate: true, iterations: 0 });
    }

    let (mut lo, mut hi) = (lo_bound, hi_bound);
    let mut best: Option<(BetaParams, f64)> = None;
    let mut iterations = 0;
    while iterations < CALIBRATION_MAX_ITER && hi - lo > 1e-12 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (prior, ratio) = ratio_at(mid.exp())?;
        let closer = best.is_none_or(|(_, r)| (ratio - target_ratio).abs() < (r - target_ratio).abs());
        if closer {
            best = Some((prior, ratio));
        }
        if (ratio - target_ratio).abs() <= CALIBRATION_TOLERANCE {
            return Ok(Calibration { prior, ratio, target_ratio, degenerate: false, iterations });
        }
        if ratio > target_ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == lo_bound {
        let (_, at_lowest) = ratio_at(CONCENTRATION_BOUNDS.0)?;
        if at_lowest < target_ratio - CALIBRATION_TOLERANCE {
            return Err(Error::CalibrationUnreachable { target: target_ratio, at_lowest });
        }
    }
    let (prior, ratio) = best.expect("at least one bisection step");
    Ok(Calibration { prior, ratio, target_ratio, degenerate: false, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DEFAULT_EPS;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn conjugate_arithmetic() {
        let flat = BetaParams::new(1.0, 1.0).unwrap();
        assert_eq!(posterior_update(flat, 0, 0).unwrap(), flat);
        let post = posterior_update(flat, 15, 1000).unwrap();
        assert_eq!((post.alpha(), post.beta()), (16.0, 986.0));
        assert!(posterior_update(flat, 3, 2).is_err());
    }

    #[test]
    fn infinite_concentration_has_unit_ratio() {
        let prior = BetaParams::from_mean_concentration(p(1.89e-4), 1e12).unwrap();
        let r = spread_report(2_000_000, prior, p(0.9999), DEFAULT_EPS).unwrap();
        assert_eq!(r.ratio, 1.0);
    }

    #[test]
    fn unit_target_is_degenerate() {
        let c = calibrate_prior(2_000_000, p(2.0034e-4), 1.0, p(0.9999), DEFAULT_EPS).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.prior.concentration(), CONCENTRATION_BOUNDS.1);
    }

    #[test]
    fn zero_width_plugin_is_flagged() {
        let prior = BetaParams::from_mean_concentration(p(1e-9), 100.0).unwrap();
        assert_eq!(spread_report(10, prior, p(0.9), DEFAULT_EPS).unwrap_err(), Error::ZeroPluginWidth);
    }

    #[test]
    fn unreachable_target_fails() {
        // n = 20 caps any interval width at 20
        let err = calibrate_prior(20, p(0.5), 50.0, p(0.9), DEFAULT_EPS).unwrap_err();
        assert!(matches!(err, Error::CalibrationUnreachable { .. }), "{err:?}");
    }
}

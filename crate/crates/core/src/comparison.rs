//! Comparing two independent count distributions, and turning per-person
//! relative risk into statements about whole populations.

use serde::{Deserialize, Serialize};

use crate::distributions::{
    binomial_distribution, binomial_log_pmf, convolve, neumaier_sum, CountDistribution, CredibleInterval,
};
use crate::error::{Error, Result};
use crate::probability::Probability;

/// Largest population accepted per arm.
pub const MAX_POPULATION: u64 = u32::MAX as u64;

/// `P(X > Y)`, `P(X = Y)`, `P(X < Y)` over the stored supports.
///
/// The three values are computed independently; `error_bound` (the sum of both
/// omitted masses) bounds how far their sum can fall short of one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exceedance {
    pub greater: f64,
    pub equal: f64,
    pub less: f64,
    pub error_bound: f64,
}

impl Exceedance {
    pub fn total(&self) -> f64 {
        self.greater + self.equal + self.less
    }
}

/// Whether to sum over `x` (true) or `y`: the shorter support, with a
/// tie-break that does not depend on argument order.
fn sum_over_first(x: &CountDistribution, y: &CountDistribution) -> bool {
    use std::cmp::Ordering;
    let by_len = x.len().cmp(&y.len()).then(x.support_lo().cmp(&y.support_lo()));
    match by_len {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => {
            for (a, b) in x.log_mass().iter().zip(y.log_mass()) {
                match a.total_cmp(b) {
                    Ordering::Equal => continue,
                    o => return o == Ordering::Less,
                }
            }
            true
        }
    }
}

/// For each point of `outer`, weight the masses of `inner` below, at and
/// above it. Returns `(P(inner < outer), P(inner = outer), P(inner > outer))`.
fn sweep(outer: &CountDistribution, inner: &CountDistribution) -> (f64, f64, f64) {
    let masses = inner.masses();
    let len = masses.len();
    // below[t] = Σ_{s < t} m_s ; above[t] = Σ_{s > t} m_s
    let mut below = vec![0.0; len + 1];
    for t in 0..len {
        below[t + 1] = below[t] + masses[t];
    }
    let mut above = vec![0.0; len + 1];
    for t in (0..len).rev() {
        above[t] = above[t + 1] + masses[t];
    }
    let lo = inner.support_lo();
    let hi = inner.support_hi();
    let mut lt = Vec::with_capacity(outer.len());
    let mut eq = Vec::with_capacity(outer.len());
    let mut gt = Vec::with_capacity(outer.len());
    for (k, w) in outer.iter() {
        let (b, e, a) = if k < lo {
            (0.0, 0.0, above[0])
        } else if k > hi {
            (below[len], 0.0, 0.0)
        } else {
            let t = (k - lo) as usize;
            (below[t], masses[t], above[t + 1])
        };
        lt.push(w * b);
        eq.push(w * e);
        gt.push(w * a);
    }
    (neumaier_sum(lt.into_iter()), neumaier_sum(eq.into_iter()), neumaier_sum(gt.into_iter()))
}

pub fn exceedance(x: &CountDistribution, y: &CountDistribution) -> Exceedance {
    let error_bound = x.truncated_mass() + y.truncated_mass();
    if sum_over_first(x, y) {
        // inner = y: P(Y < X) = P(X > Y)
        let (y_below, equal, y_above) = sweep(x, y);
        Exceedance { greater: y_below, equal, less: y_above, error_bound }
    } else {
        let (x_below, equal, x_above) = sweep(y, x);
        Exceedance { greater: x_above, equal, less: x_below, error_bound }
    }
}

fn clamp_prob(v: f64) -> Probability {
    Probability::new(v.clamp(0.0, 1.0)).expect("clamped")
}

pub fn prob_greater(x: &CountDistribution, y: &CountDistribution) -> Probability {
    clamp_prob(exceedance(x, y).greater)
}

pub fn prob_equal(x: &CountDistribution, y: &CountDistribution) -> Probability {
    clamp_prob(exceedance(x, y).equal)
}

pub fn prob_less(x: &CountDistribution, y: &CountDistribution) -> Probability {
    clamp_prob(exceedance(x, y).less)
}

/// Two-arm population: counts and per-person probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExposureScenario {
    pub n_exposed: u64,
    pub n_unexposed: u64,
    pub p_exposed: Probability,
    pub p_unexposed: Probability,
}

pub(crate) fn check_population(n: u64) -> Result<()> {
    if (1..=MAX_POPULATION).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidPopulation(n))
    }
}

impl ExposureScenario {
    pub fn new(n_exposed: u64, n_unexposed: u64, p_exposed: Probability, p_unexposed: Probability) -> Result<Self> {
        let s = ExposureScenario { n_exposed, n_unexposed, p_exposed, p_unexposed };
        s.validate()?;
        Ok(s)
    }

    /// Equal arms of `n` with `p_exposed = rr * p_unexposed`.
    pub fn split(n_per_arm: u64, p_unexposed: f64, rr: f64) -> Result<Self> {
        Self::new(
            n_per_arm,
            n_per_arm,
            Probability::named("p_exposed", rr * p_unexposed)?,
            Probability::named("p_unexposed", p_unexposed)?,
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_population(self.n_exposed)?;
        check_population(self.n_unexposed)
    }

    pub fn arms(&self, eps: f64) -> Result<(CountDistribution, CountDistribution)> {
        Ok((
            binomial_distribution(self.n_exposed, self.p_exposed, eps)?,
            binomial_distribution(self.n_unexposed, self.p_unexposed, eps)?,
        ))
    }
}

/// Population-level summary of one exposure scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub p_exposed_more: Probability,
    pub p_equal: Probability,
    pub p_unexposed_more: Probability,
    pub error_bound: f64,
    /// `None` when the unexposed probability is zero.
    pub per_person_rr: Option<f64>,
    /// Ratio of at-least-one-case probabilities; `None` when the denominator is zero.
    pub effective_rr: Option<f64>,
    pub p_nobody_exposed: Probability,
    pub p_nobody_unexposed: Probability,
    pub p_one_exposed: Probability,
    pub p_one_unexposed: Probability,
    pub mode_exposed: u64,
    pub mode_unexposed: u64,
}

/// `(1 - p)^n`.
fn prob_nobody(n: u64, p: Probability) -> f64 {
    if p.value() == 1.0 {
        return 0.0;
    }
    (n as f64 * (-p.value()).ln_1p()).exp()
}

/// `1 - (1 - p)^n`, without cancellation for tiny `n p`.
fn prob_at_least_one(n: u64, p: Probability) -> f64 {
    if p.value() == 1.0 {
        return 1.0;
    }
    -(n as f64 * (-p.value()).ln_1p()).exp_m1()
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

pub fn effective_rr(s: &ExposureScenario) -> Option<f64> {
    ratio(prob_at_least_one(s.n_exposed, s.p_exposed), prob_at_least_one(s.n_unexposed, s.p_unexposed))
}

pub fn summarize(s: &ExposureScenario, eps: f64) -> Result<ComparisonSummary> {
    s.validate()?;
    let (exposed, unexposed) = s.arms(eps)?;
    let ex = exceedance(&exposed, &unexposed);
    let one = |n: u64, p: Probability| -> Result<Probability> {
        if n == 0 {
            return Ok(Probability::ZERO);
        }
        Ok(clamp_prob(binomial_log_pmf(n, p, 1)?.exp()))
    };
    Ok(ComparisonSummary {
        p_exposed_more: clamp_prob(ex.greater),
        p_equal: clamp_prob(ex.equal),
        p_unexposed_more: clamp_prob(ex.less),
        error_bound: ex.error_bound,
        per_person_rr: ratio(s.p_exposed.value(), s.p_unexposed.value()),
        effective_rr: effective_rr(s),
        p_nobody_exposed: clamp_prob(prob_nobody(s.n_exposed, s.p_exposed)),
        p_nobody_unexposed: clamp_prob(prob_nobody(s.n_unexposed, s.p_unexposed)),
        p_one_exposed: one(s.n_exposed, s.p_exposed)?,
        p_one_unexposed: one(s.n_unexposed, s.p_unexposed)?,
        mode_exposed: exposed.mode(),
        mode_unexposed: unexposed.mode(),
    })
}

/// Everybody at the unexposed probability.
pub fn counterfactual_all_low(s: &ExposureScenario, eps: f64) -> Result<CountDistribution> {
    s.validate()?;
    binomial_distribution(s.n_exposed + s.n_unexposed, s.p_unexposed, eps)
}

/// Total cases under split exposure versus the all-low counterfactual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitComparison {
    pub p_split_more: Probability,
    pub p_equal: Probability,
    pub p_all_low_more: Probability,
    pub error_bound: f64,
    pub mode_split: u64,
    pub mode_all_low: u64,
}

impl SplitComparison {
    pub fn from_distributions(split: &CountDistribution, all_low: &CountDistribution) -> Self {
        let ex = exceedance(split, all_low);
        SplitComparison {
            p_split_more: clamp_prob(ex.greater),
            p_equal: clamp_prob(ex.equal),
            p_all_low_more: clamp_prob(ex.less),
            error_bound: ex.error_bound,
            mode_split: split.mode(),
            mode_all_low: all_low.mode(),
        }
    }
}

/// `(split total, all-low total)`.
pub fn split_and_all_low(s: &ExposureScenario, eps: f64) -> Result<(CountDistribution, CountDistribution)> {
    let (exposed, unexposed) = s.arms(eps)?;
    Ok((convolve(&exposed, &unexposed, eps)?, counterfactual_all_low(s, eps)?))
}

pub fn split_vs_counterfactual(s: &ExposureScenario, eps: f64) -> Result<SplitComparison> {
    let (split, all_low) = split_and_all_low(s, eps)?;
    Ok(SplitComparison::from_distributions(&split, &all_low))
}

/// Bounds on how many cases eliminating exposure could prevent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LivesSaved {
    /// Upper end of the split interval minus lower end of the all-low interval.
    pub best_case: i64,
    /// Difference of modes; negative means the all-low total is larger.
    pub most_likely: i64,
    /// `P(split total >= upper end of its interval)`.
    pub tail_prob_best_case: Probability,
    pub split_interval: CredibleInterval,
    pub all_low_interval: CredibleInterval,
}

impl LivesSaved {
    pub fn from_distributions(
        split: &CountDistribution,
        all_low: &CountDistribution,
        coverage: Probability,
    ) -> Result<Self> {
        let split_interval = split.central_interval(coverage)?;
        let all_low_interval = all_low.central_interval(coverage)?;
        Ok(LivesSaved {
            best_case: split_interval.hi as i64 - all_low_interval.lo as i64,
            most_likely: split.mode() as i64 - all_low.mode() as i64,
            tail_prob_best_case: clamp_prob(split.upper_tail(split_interval.hi)),
            split_interval,
            all_low_interval,
        })
    }
}

pub fn lives_saved_bounds(s: &ExposureScenario, coverage: Probability, eps: f64) -> Result<LivesSaved> {
    let (split, all_low) = split_and_all_low(s, eps)?;
    LivesSaved::from_distributions(&split, &all_low, coverage)
}

/// A statement about counts already observed is either true or false.
pub fn observed_comparison(high_cases: u64, low_cases: u64, predicate: impl Fn(u64, u64) -> bool) -> Probability {
    if predicate(high_cases, low_cases) {
        Probability::ONE
    } else {
        Probability::ZERO
    }
}

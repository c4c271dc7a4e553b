//! Synthetic cohorts with a declared causal ground truth.
//!
//! Individuals come in two labelled groups of `n_per_group`; group 1 is the
//! "exposed" label. Outcomes are caused only by what the spec declares, and
//! the classical test is then run against labels, covariates and proxies that
//! may or may not be the cause.
//!
//! # Seeding
//!
//! A cohort seed drives four independent ChaCha8 streams (outcome, latent
//! factor, covariate noise, proxy flips), so switching a proxy or covariate on
//! never changes the outcome draws. Replication `i` of a study with master
//! seed `s` uses the cohort seed [`replication_seed`]`(s, i)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{two_proportion_test, TestResult, TwoByTwo};
use crate::error::{Error, Result};
use crate::probability::Probability;

/// Largest cohort (both groups together) [`generate`] will build.
pub const MAX_INDIVIDUALS: u64 = 10_000_000;

const STREAM_OUTCOME: u64 = 0;
const STREAM_LATENT: u64 = 1;
const STREAM_COVARIATE: u64 = 2;
const STREAM_PROXY: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrueCause {
    ExposureLabel,
    LatentFactor,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Noise {
    None,
    /// The group indicator fed to the rule is flipped with probability `p`.
    Flip {
        p: Probability,
    },
    /// Additive normal noise with standard deviation `sd`.
    Gaussian {
        sd: f64,
    },
}

/// `value = intercept + slope * group + noise`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovariateRule {
    pub name: String,
    #[serde(default)]
    pub intercept: f64,
    pub slope: f64,
    #[serde(default = "no_noise")]
    pub noise: Noise,
}

fn no_noise() -> Noise {
    Noise::None
}

impl CovariateRule {
    pub fn threshold(&self) -> f64 {
        self.intercept + self.slope / 2.0
    }

    /// Whether `value` falls on the group-1 side of the threshold.
    pub fn high_side(&self, value: f64) -> bool {
        if self.slope > 0.0 {
            value > self.threshold()
        } else {
            value < self.threshold()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxyRule {
    /// Probability the measured proxy equals the true exposure.
    pub accuracy: Probability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CausalSpec {
    pub n_per_group: u64,
    pub true_cause: TrueCause,
    /// Latent-factor association with the group label, in `[0, 1]`:
    /// `P(factor | group 1) = (1 + s) / 2`, `P(factor | group 0) = (1 - s) / 2`.
    #[serde(default)]
    pub confounding: f64,
    pub baseline_p: Probability,
    pub effect_p: Probability,
    #[serde(default)]
    pub covariate_rules: Vec<CovariateRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proxy_rule: Option<ProxyRule>,
}

impl CausalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_per_group == 0 {
            return Err(Error::InvalidSpec("n_per_group must be at least 1".into()));
        }
        if self.n_per_group > MAX_INDIVIDUALS / 2 {
            return Err(Error::InvalidSpec(format!(
                "n_per_group = {} exceeds the cap of {} individuals",
                self.n_per_group, MAX_INDIVIDUALS
            )));
        }
        if !(0.0..=1.0).contains(&self.confounding) {
            return Err(Error::InvalidSpec(format!("confounding = {} must lie in [0, 1]", self.confounding)));
        }
        for (i, rule) in self.covariate_rules.iter().enumerate() {
            if self.covariate_rules[..i].iter().any(|r| r.name == rule.name) {
                return Err(Error::InvalidSpec(format!("duplicate covariate `{}`", rule.name)));
            }
            if !rule.intercept.is_finite() || !rule.slope.is_finite() {
                return Err(Error::InvalidSpec(format!("covariate `{}` is not finite", rule.name)));
            }
            if let Noise::Gaussian { sd } = rule.noise {
                if !(sd.is_finite() && sd >= 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "covariate `{}` noise sd = {sd} must be finite and nonnegative",
                        rule.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn covariate(&self, name: &str) -> Result<(usize, &CovariateRule)> {
        self.covariate_rules
            .iter()
            .enumerate()
            .find(|(_, r)| r.name == name)
            .ok_or_else(|| Error::UnknownCovariate(name.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Individual {
    pub group: bool,
    pub true_exposure: bool,
    pub proxy_exposure: bool,
    pub covariates: Vec<f64>,
    pub outcome: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cohort {
    pub spec: CausalSpec,
    pub seed: u64,
    pub individuals: Vec<Individual>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Cohort seed of replication `i`: `splitmix64(splitmix64(master) ^ i)`.
pub fn replication_seed(master: u64, i: u64) -> u64 {
    splitmix64(splitmix64(master) ^ i)
}

fn labels(n_per_group: u64) -> impl Iterator<Item = bool> {
    (0..2 * n_per_group).map(move |i| i >= n_per_group)
}

/// Draws a cohort. Group 0 occupies the first `n_per_group` records.
pub fn generate(spec: &CausalSpec, seed: u64) -> Result<Cohort> {
    spec.validate()?;
    let mut outcome_rng = stream(seed, STREAM_OUTCOME);
    let mut latent_rng = stream(seed, STREAM_LATENT);
    let mut covariate_rng = stream(seed, STREAM_COVARIATE);
    let mut proxy_rng = stream(seed, STREAM_PROXY);
    let (base, effect) = (spec.baseline_p.value(), spec.effect_p.value());
    let (latent_hi, latent_lo) = ((1.0 + spec.confounding) / 2.0, (1.0 - spec.confounding) / 2.0);

    let individuals = labels(spec.n_per_group)
        .map(|group| {
            let caused = match spec.true_cause {
                TrueCause::ExposureLabel => group,
                TrueCause::LatentFactor => latent_rng.random_bool(if group { latent_hi } else { latent_lo }),
                TrueCause::None => false,
            };
            let outcome = outcome_rng.random_bool(if caused { effect } else { base });
            let covariates =
                spec.covariate_rules.iter().map(|r| covariate_value(r, group, &mut covariate_rng)).collect();
            let proxy_exposure = match spec.proxy_rule {
                Some(rule) => group ^ !proxy_rng.random_bool(rule.accuracy.value()),
                None => group,
            };
            Individual { group, true_exposure: group, proxy_exposure, covariates, outcome }
        })
        .collect();
    Ok(Cohort { spec: spec.clone(), seed, individuals })
}

fn covariate_value(rule: &CovariateRule, group: bool, rng: &mut ChaCha8Rng) -> f64 {
    let g = |b: bool| if b { 1.0 } else { 0.0 };
    match rule.noise {
        Noise::None => rule.intercept + rule.slope * g(group),
        Noise::Flip { p } => {
            let flipped = group ^ rng.random_bool(p.value());
            rule.intercept + rule.slope * g(flipped)
        }
        Noise::Gaussian { sd } => {
            let z: f64 = Normal::new(0.0, sd).expect("validated sd").sample(rng);
            rule.intercept + rule.slope * g(group) + z
        }
    }
}

impl Cohort {
    /// A cohort whose groups have exactly `cases_exposed` and `cases_unexposed`
    /// outcomes (the first records of each group), with covariates and proxy
    /// drawn from `seed` as in [`generate`].
    pub fn with_case_counts(spec: &CausalSpec, cases_exposed: u64, cases_unexposed: u64, seed: u64) -> Result<Cohort> {
        let n = spec.n_per_group;
        for k in [cases_exposed, cases_unexposed] {
            if k > n {
                return Err(Error::CountExceedsTrials { k, n });
            }
        }
        let mut cohort = generate(spec, seed)?;
        for (i, ind) in cohort.individuals.iter_mut().enumerate() {
            let i = i as u64;
            ind.outcome = if ind.group { i - n < cases_exposed } else { i < cases_unexposed };
        }
        Ok(cohort)
    }

    /// Classical test with groups defined by `in_a`; group `a` is the one
    /// the predicate selects. `None` when either group is empty.
    pub fn test_by(
        &self,
        in_a: impl Fn(&Individual) -> bool,
        continuity: bool,
        alpha: Probability,
    ) -> Option<TestResult> {
        let (mut ca, mut na, mut cb, mut nb) = (0u64, 0u64, 0u64, 0u64);
        for ind in &self.individuals {
            if in_a(ind) {
                na += 1;
                ca += u64::from(ind.outcome);
            } else {
                nb += 1;
                cb += u64::from(ind.outcome);
            }
        }
        let table = TwoByTwo::new(ca, na, cb, nb).ok()?;
        Some(two_proportion_test(&table, continuity, alpha))
    }

    pub fn test_by_label(&self, continuity: bool, alpha: Probability) -> TestResult {
        self.test_by(|i| i.group, continuity, alpha).expect("both groups are nonempty")
    }
}

/// The classical test grouped by exposure label, then by the named covariate's
/// threshold `intercept + slope / 2`.
pub fn banana_swap(
    cohort: &Cohort,
    covariate_name: &str,
    continuity: bool,
    alpha: Probability,
) -> Result<(TestResult, TestResult)> {
    let (idx, rule) = cohort.spec.covariate(covariate_name)?;
    if rule.slope == 0.0 {
        return Err(Error::NotSeparating(covariate_name.to_string()));
    }
    let by_label = cohort.test_by_label(continuity, alpha);
    let by_covariate = cohort
        .test_by(|i| rule.high_side(i.covariates[idx]), continuity, alpha)
        .ok_or_else(|| Error::NotSeparating(covariate_name.to_string()))?;
    Ok((by_label, by_covariate))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudyOptions {
    pub replications: u64,
    pub alpha: Probability,
    pub seed: u64,
    pub continuity: bool,
}

impl StudyOptions {
    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidSpec("replications must be at least 1".into()));
        }
        Ok(())
    }
}

/// Analysis variants run on every replicated cohort.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    ExposureLabel,
    Proxy,
    Covariate(String),
}

impl Variant {
    pub fn name(&self) -> String {
        match self {
            Variant::ExposureLabel => "exposure-label".into(),
            Variant::Proxy => "proxy-exposure".into(),
            Variant::Covariate(c) => format!("covariate:{c}"),
        }
    }

    /// Label, then proxy if present, then each covariate in spec order.
    pub fn all_for(spec: &CausalSpec) -> Vec<Variant> {
        let mut v = vec![Variant::ExposureLabel];
        if spec.proxy_rule.is_some() {
            v.push(Variant::Proxy);
        }
        v.extend(spec.covariate_rules.iter().map(|r| Variant::Covariate(r.name.clone())));
        v
    }
}

/// P-values of each variant on each replication, in replication order.
/// `p_values[i][j]` is variant `j` on replication `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Replications {
    pub variants: Vec<Variant>,
    pub p_values: Vec<Vec<Probability>>,
    pub alpha: Probability,
}

pub fn replicate(spec: &CausalSpec, variants: &[Variant], opts: &StudyOptions) -> Result<Replications> {
    spec.validate()?;
    opts.validate()?;
    for v in variants {
        match v {
            Variant::Proxy if spec.proxy_rule.is_none() => {
                return Err(Error::InvalidSpec("proxy analysis needs a proxy_rule".into()))
            }
            Variant::Covariate(name) if spec.covariate(name)?.1.slope == 0.0 => {
                return Err(Error::NotSeparating(name.clone()))
            }
            _ => {}
        }
    }
    let p_values = (0..opts.replications)
        .into_par_iter()
        .map(|i| {
            let cohort = generate(spec, replication_seed(opts.seed, i))?;
            variants
                .iter()
                .map(|v| {
                    let result = match v {
                        Variant::ExposureLabel => Some(cohort.test_by_label(opts.continuity, opts.alpha)),
                        Variant::Proxy => cohort.test_by(|x| x.proxy_exposure, opts.continuity, opts.alpha),
                        Variant::Covariate(name) => banana_swap(&cohort, name, opts.continuity, opts.alpha)
                            .map(|(_, c)| Some(c))
                            .or_else(|e| match e {
                                Error::NotSeparating(_) => Ok(None),
                                e => Err(e),
                            })?,
                    };
                    // an empty proxy or covariate group carries no evidence
                    Ok(result.map_or(Probability::ONE, |r| r.p_value))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Replications { variants: variants.to_vec(), p_values, alpha: opts.alpha })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: String,
    pub rejection_rate: Probability,
    pub mean_p: Probability,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationReport {
    pub replications: u64,
    pub variants: Vec<VariantSummary>,
}

impl ReplicationReport {
    pub fn variant(&self, name: &str) -> Option<&VariantSummary> {
        self.variants.iter().find(|v| v.variant == name)
    }
}

impl Replications {
    pub fn rejects(&self, rep: usize, variant: usize) -> bool {
        self.p_values[rep][variant].value() < self.alpha.value()
    }

    pub fn report(&self) -> ReplicationReport {
        let r = self.p_values.len();
        let variants = self
            .variants
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let rejections = (0..r).filter(|&i| self.rejects(i, j)).count();
                let sum_p: f64 = self.p_values.iter().map(|row| row[j].value()).sum();
                VariantSummary {
                    variant: v.name(),
                    rejection_rate: Probability::new(rejections as f64 / r as f64).expect("rate"),
                    mean_p: Probability::new((sum_p / r as f64).min(1.0)).expect("mean of probabilities"),
                }
            })
            .collect();
        ReplicationReport { replications: r as u64, variants }
    }
}

/// Every variant the spec supports, as reported by the `simulate` command.
pub fn simulate(spec: &CausalSpec, opts: &StudyOptions) -> Result<ReplicationReport> {
    Ok(replicate(spec, &Variant::all_for(spec), opts)?.report())
}

/// True-exposure and proxy-exposure analyses side by side.
pub fn proxy_study(spec: &CausalSpec, opts: &StudyOptions) -> Result<ReplicationReport> {
    if spec.proxy_rule.is_none() {
        return Err(Error::InvalidSpec("proxy study needs a proxy_rule".into()));
    }
    Ok(replicate(spec, &[Variant::ExposureLabel, Variant::Proxy], opts)?.report())
}

/// Fraction of replications in which the exposure-label test rejects although
/// the label is not the cause.
pub fn false_cause_rate(spec: &CausalSpec, opts: &StudyOptions) -> Result<Probability> {
    if spec.true_cause == TrueCause::ExposureLabel {
        return Err(Error::InvalidSpec("false-cause rate needs a true cause other than the exposure label".into()));
    }
    let report = replicate(spec, &[Variant::ExposureLabel], opts)?.report();
    Ok(report.variants[0].rejection_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    fn spec(cause: TrueCause, base: f64, effect: f64) -> CausalSpec {
        CausalSpec {
            n_per_group: 1000,
            true_cause: cause,
            confounding: 0.0,
            baseline_p: p(base),
            effect_p: p(effect),
            covariate_rules: vec![],
            proxy_rule: None,
        }
    }

    #[test]
    fn zero_baseline_means_no_outcomes() {
        let c = generate(&spec(TrueCause::None, 0.0, 0.5), 7).unwrap();
        assert_eq!(c.individuals.len(), 2000);
        assert!(c.individuals.iter().all(|i| !i.outcome));
    }

    #[test]
    fn generation_is_reproducible() {
        let mut s = spec(TrueCause::ExposureLabel, 0.005, 0.015);
        s.proxy_rule = Some(ProxyRule { accuracy: p(0.7) });
        assert_eq!(generate(&s, 42).unwrap(), generate(&s, 42).unwrap());
        assert_ne!(generate(&s, 42).unwrap(), generate(&s, 43).unwrap());
    }

    #[test]
    fn proxy_does_not_disturb_outcomes() {
        let plain = spec(TrueCause::ExposureLabel, 0.005, 0.015);
        let mut with_proxy = plain.clone();
        with_proxy.proxy_rule = Some(ProxyRule { accuracy: p(0.5) });
        let a = generate(&plain, 3).unwrap();
        let b = generate(&with_proxy, 3).unwrap();
        let outcomes = |c: &Cohort| c.individuals.iter().map(|i| i.outcome).collect::<Vec<_>>();
        assert_eq!(outcomes(&a), outcomes(&b));
    }

    #[test]
    fn cap_and_duplicates_rejected() {
        let mut s = spec(TrueCause::None, 0.1, 0.1);
        s.n_per_group = 5_000_001;
        assert!(generate(&s, 0).is_err());
        s.n_per_group = 10;
        let rule = CovariateRule { name: "x".into(), intercept: 0.0, slope: 1.0, noise: Noise::None };
        s.covariate_rules = vec![rule.clone(), rule];
        assert!(matches!(s.validate(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn banana_errors() {
        let mut s = spec(TrueCause::ExposureLabel, 0.005, 0.015);
        s.covariate_rules.push(CovariateRule { name: "flat".into(), intercept: 3.0, slope: 0.0, noise: Noise::None });
        let c = generate(&s, 1).unwrap();
        assert_eq!(banana_swap(&c, "flat", true, p(0.05)).unwrap_err(), Error::NotSeparating("flat".into()));
        assert_eq!(banana_swap(&c, "kiwi", true, p(0.05)).unwrap_err(), Error::UnknownCovariate("kiwi".into()));
    }

    #[test]
    fn negative_slope_separates_too() {
        let mut s = spec(TrueCause::ExposureLabel, 0.005, 0.015);
        s.covariate_rules.push(CovariateRule {
            name: "apples".into(),
            intercept: 2.0,
            slope: -1.0,
            noise: Noise::None,
        });
        let c = Cohort::with_case_counts(&s, 15, 5, 0).unwrap();
        let (a, b) = banana_swap(&c, "apples", true, p(0.05)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn replication_seeds_differ() {
        let seeds: std::collections::BTreeSet<_> = (0..1000).map(|i| replication_seed(9, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn zero_replications_rejected() {
        let opts = StudyOptions { replications: 0, alpha: p(0.05), seed: 1, continuity: true };
        assert!(simulate(&spec(TrueCause::None, 0.01, 0.01), &opts).is_err());
    }
}

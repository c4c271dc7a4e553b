//! Truncated count distributions held in log space.
//!
//! Every constructor brackets the support around the mean (±12 standard
//! deviations), sums the omitted tails exactly, and widens the bracket
//! geometrically until the omitted two-sided mass is at most `eps`. The
//! omitted mass is carried on the distribution; it is never renormalized away.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{BetaParams, Probability};
use crate::special::{binomial_log_pmf_raw, ln_gamma, ln_gamma_ratio, poisson_log_pmf_raw, stirling_remainder};

/// Default truncation of omitted tail mass.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Tie tolerance (in log space) used by [`CountDistribution::mode`].
const MODE_TIE_LOG_TOL: f64 = 1e-12;

/// Half-width of the initial support bracket in standard deviations.
const BRACKET_SDS: f64 = 12.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistKind {
    Binomial,
    Poisson,
    BetaBinomial,
    Convolution,
}

/// A discrete distribution over case counts, stored on a truncated support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountDistribution {
    kind: DistKind,
    support_lo: u64,
    log_mass: Vec<f64>,
    truncated_lower: f64,
    truncated_upper: f64,
}

/// A central interval together with the mass it actually holds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CredibleInterval {
    pub lo: u64,
    pub hi: u64,
    pub coverage: Probability,
    pub achieved: Probability,
}

impl CredibleInterval {
    pub fn width(&self) -> u64 {
        self.hi - self.lo
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1e-6 {
        Ok(())
    } else {
        Err(Error::InvalidEps(eps))
    }
}

pub(crate) fn check_coverage(coverage: Probability) -> Result<()> {
    let c = coverage.value();
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidCoverage(c))
    }
}

impl CountDistribution {
    pub fn point_mass(kind: DistKind, at: u64) -> Self {
        CountDistribution { kind, support_lo: at, log_mass: vec![0.0], truncated_lower: 0.0, truncated_upper: 0.0 }
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn support_lo(&self) -> u64 {
        self.support_lo
    }

    pub fn support_hi(&self) -> u64 {
        self.support_lo + self.log_mass.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.log_mass.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn log_mass(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn contains(&self, k: u64) -> bool {
        k >= self.support_lo && k <= self.support_hi()
    }

    /// Log-probability of `k`; `-inf` outside the stored support.
    pub fn log_mass_at(&self, k: u64) -> f64 {
        if self.contains(k) {
            self.log_mass[(k - self.support_lo) as usize]
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn mass(&self, k: u64) -> f64 {
        self.log_mass_at(k).exp()
    }

    /// Stored masses in support order.
    pub fn masses(&self) -> Vec<f64> {
        self.log_mass.iter().map(|l| l.exp()).collect()
    }

    /// `(count, mass)` over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let lo = self.support_lo;
        self.log_mass.iter().enumerate().map(move |(i, l)| (lo + i as u64, l.exp()))
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_lower + self.truncated_upper
    }

    pub fn truncated_lower(&self) -> f64 {
        self.truncated_lower
    }

    pub fn truncated_upper(&self) -> f64 {
        self.truncated_upper
    }

    pub fn stored_mass(&self) -> f64 {
        neumaier_sum(self.log_mass.iter().map(|l| l.exp()))
    }

    pub fn mean(&self) -> f64 {
        neumaier_sum(self.iter().map(|(k, m)| k as f64 * m))
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        neumaier_sum(self.iter().map(|(k, m)| {
            let d = k as f64 - mu;
            d * d * m
        }))
    }

    /// `P(X <= k)`, counting the omitted lower tail.
    pub fn cdf(&self, k: u64) -> f64 {
        if k < self.support_lo {
            return self.truncated_lower;
        }
        let upto = (k.min(self.support_hi()) - self.support_lo) as usize;
        self.truncated_lower + neumaier_sum(self.log_mass[..=upto].iter().map(|l| l.exp()))
    }

    /// `P(X >= k)`, counting the omitted upper tail.
    pub fn upper_tail(&self, k: u64) -> f64 {
        if k > self.support_hi() {
            return self.truncated_upper;
        }
        let from = (k.max(self.support_lo) - self.support_lo) as usize;
        self.truncated_upper + neumaier_sum(self.log_mass[from..].iter().map(|l| l.exp()))
    }

    /// Most probable count; ties go to the smallest count.
    pub fn mode(&self) -> u64 {
        let mut best = 0usize;
        for (i, &l) in self.log_mass.iter().enumerate().skip(1) {
            if l > self.log_mass[best] + MODE_TIE_LOG_TOL {
                best = i;
            }
        }
        self.support_lo + best as u64
    }

    /// Smallest `k` with `P(X <= k) >= q`.
    pub fn quantile(&self, q: Probability) -> u64 {
        let q = q.value();
        let mut cdf = self.truncated_lower;
        for (i, l) in self.log_mass.iter().enumerate() {
            cdf += l.exp();
            if cdf >= q {
                return self.support_lo + i as u64;
            }
        }
        self.support_hi()
    }

    /// Equal-tailed interval `[quantile((1-c)/2), quantile(1-(1-c)/2)]`.
    pub fn central_interval(&self, coverage: Probability) -> Result<CredibleInterval> {
        check_coverage(coverage)?;
        let tail = (1.0 - coverage.value()) / 2.0;
        let lo = self.quantile(Probability::new(tail)?);
        let hi = self.quantile(Probability::new(1.0 - tail)?);
        let a = (lo - self.support_lo) as usize;
        let b = (hi - self.support_lo) as usize;
        let achieved = neumaier_sum(self.log_mass[a..=b].iter().map(|l| l.exp())).min(1.0);
        Ok(CredibleInterval { lo, hi, coverage, achieved: Probability::new(achieved)? })
    }
}

/// Compensated summation.
pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ln P(X = k)` for `X ~ Binomial(n, p)`.
pub fn binomial_log_pmf(n: u64, p: Probability, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::CountExceedsTrials { k, n });
    }
    let p = p.value();
    Ok(if p == 0.0 {
        if k == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else if p == 1.0 {
        if k == n {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        binomial_log_pmf_raw(n, k, p, 1.0 - p)
    })
}

/// `ln P(X = k)` for `X ~ BetaBinomial(n, alpha, beta)`.
pub fn beta_binomial_log_pmf(n: u64, prior: BetaParams, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::CountExceedsTrials { k, n });
    }
    Ok(beta_binomial_log_pmf_raw(n, k, prior.alpha(), prior.beta()))
}

fn beta_binomial_log_pmf_raw(n: u64, k: u64, alpha: f64, beta: f64) -> f64 {
    // reflect so that a <= b
    let (k, a, b) = if alpha > beta { (n - k, beta, alpha) } else { (k, alpha, beta) };
    let c = a + b;
    let (nf, kf) = (n as f64, k as f64);
    let rest = nf - kf;
    if c <= 1e4 {
        -ln_gamma_ratio(nf + 1.0, c - 1.0)
            + ln_gamma_ratio(kf + 1.0, a - 1.0)
            + ln_gamma_ratio(rest + 1.0, b - 1.0)
            + ln_gamma(c)
            - ln_gamma(a)
            - ln_gamma(b)
    } else {
        // C(n,k) q1^k q2^(n-k) with q1 = (a+k)/(c+n) absorbs the m ln(x+m)
        // parts of the three rising factorials and their -m parts cancel. The
        // x ln(1 + m/x) parts combine into a ln(q1 c/a) + b ln(q2 c/b), whose
        // arguments share the numerator k c - a n.
        let q1 = (a + kf) / (c + nf);
        let q2 = (b + rest) / (c + nf);
        let an = a * nf;
        let an_err = a.mul_add(nf, -an);
        let num = kf.mul_add(c, -an) - an_err;
        let scale = c + nf;
        let x_ln = a * (num / (a * scale)).ln_1p() + b * (-num / (b * scale)).ln_1p();
        let half_ln = -0.5 * ((kf / a).ln_1p() + (rest / b).ln_1p() - (nf / c).ln_1p());
        let stirling = stirling_remainder(a + kf) - stirling_remainder(a) + stirling_remainder(b + rest)
            - stirling_remainder(b)
            - stirling_remainder(c + nf)
            + stirling_remainder(c);
        binomial_log_pmf_raw(n, k, q1, q2) + x_ln + half_ln + stirling
    }
}

struct Law<F: Fn(u64) -> f64> {
    log_pmf: F,
    max: Option<u64>,
    log_concave: bool,
    mean: f64,
    sd: f64,
}

impl<F: Fn(u64) -> f64> Law<F> {
    /// Mass strictly below `lo`.
    fn lower_tail(&self, lo: u64) -> f64 {
        let mut acc = 0.0;
        let mut prev = f64::NAN;
        for k in (0..lo).rev() {
            let t = (self.log_pmf)(k).exp();
            acc += t;
            if self.log_concave && self.tail_done(t, prev, acc) {
                break;
            }
            prev = t;
        }
        acc
    }

    /// Mass strictly above `hi`.
    fn upper_tail(&self, hi: u64) -> f64 {
        let end = self.max.unwrap_or(u64::MAX);
        let mut acc = 0.0;
        let mut prev = f64::NAN;
        let mut k = hi;
        while k < end {
            k += 1;
            let t = (self.log_pmf)(k).exp();
            acc += t;
            if self.log_concave && self.tail_done(t, prev, acc) {
                break;
            }
            prev = t;
        }
        acc
    }

    /// Past the mode a log-concave pmf decays at least geometrically with the
    /// current ratio, bounding what remains by `t r / (1 - r)`.
    fn tail_done(&self, t: f64, prev: f64, acc: f64) -> bool {
        if t == 0.0 {
            return true;
        }
        if !(prev > 0.0) {
            return false;
        }
        let r = t / prev;
        r < 1.0 && t * r / (1.0 - r) <= 1e-17 * acc
    }

    fn build(&self, kind: DistKind, eps: f64) -> CountDistribution {
        match self.max {
            Some(max) if !self.log_concave => self.build_full(kind, max, eps),
            _ => self.build_bracketed(kind, eps),
        }
    }

    /// Without log-concavity no tail bound is available: evaluate everything
    /// once and trim whichever end is lighter while the budget allows.
    fn build_full(&self, kind: DistKind, max: u64, eps: f64) -> CountDistribution {
        let log_mass: Vec<f64> = (0..=max).map(|k| (self.log_pmf)(k)).collect();
        let (mut i, mut j) = (0usize, log_mass.len() - 1);
        let (mut tl, mut tu) = (0.0, 0.0);
        while i < j {
            let (ml, mu) = (log_mass[i].exp(), log_mass[j].exp());
            if ml <= mu && tl + tu + ml <= eps {
                tl += ml;
                i += 1;
            } else if mu < ml && tl + tu + mu <= eps {
                tu += mu;
                j -= 1;
            } else {
                break;
            }
        }
        CountDistribution {
            kind,
            support_lo: i as u64,
            log_mass: log_mass[i..=j].to_vec(),
            truncated_lower: tl,
            truncated_upper: tu,
        }
    }

    fn build_bracketed(&self, kind: DistKind, eps: f64) -> CountDistribution {
        let max = self.max.unwrap_or(u64::MAX);
        let maxf = max as f64;
        let spread = BRACKET_SDS * self.sd;
        let mut lo = (self.mean - spread).floor().max(0.0).min(maxf) as u64;
        let mut hi = (self.mean + spread).ceil().max(0.0).min(maxf) as u64;
        let centre_lo = self.mean.ceil().min(maxf) as u64;
        let centre_hi = self.mean.floor().max(0.0) as u64;
        let (mut tl, mut tu);
        loop {
            tl = self.lower_tail(lo);
            tu = self.upper_tail(hi);
            if tl + tu <= eps || (lo == 0 && hi == max) {
                break;
            }
            if tl > eps / 2.0 {
                let d = centre_lo.saturating_sub(lo).max(1);
                lo = lo.saturating_sub(d);
            }
            if tu > eps / 2.0 {
                let d = hi.saturating_sub(centre_hi).max(1);
                hi = hi.saturating_add(d).min(max);
            }
        }
        let log_mass = (lo..=hi).map(|k| (self.log_pmf)(k)).collect();
        CountDistribution { kind, support_lo: lo, log_mass, truncated_lower: tl, truncated_upper: tu }
    }
}

pub fn binomial_distribution(n: u64, p: Probability, eps: f64) -> Result<CountDistribution> {
    check_eps(eps)?;
    let pv = p.value();
    if pv == 0.0 {
        return Ok(CountDistribution::point_mass(DistKind::Binomial, 0));
    }
    if pv == 1.0 {
        return Ok(CountDistribution::point_mass(DistKind::Binomial, n));
    }
    let q = 1.0 - pv;
    let nf = n as f64;
    let law = Law {
        log_pmf: |k| binomial_log_pmf_raw(n, k, pv, q),
        max: Some(n),
        log_concave: true,
        mean: nf * pv,
        sd: (nf * pv * q).sqrt(),
    };
    Ok(law.build(DistKind::Binomial, eps))
}

pub fn poisson_distribution(lambda: f64, eps: f64) -> Result<CountDistribution> {
    check_eps(eps)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidRate(lambda));
    }
    if lambda == 0.0 {
        return Ok(CountDistribution::point_mass(DistKind::Poisson, 0));
    }
    let law = Law {
        log_pmf: |k| poisson_log_pmf_raw(k, lambda),
        max: None,
        log_concave: true,
        mean: lambda,
        sd: lambda.sqrt(),
    };
    Ok(law.build(DistKind::Poisson, eps))
}

pub fn beta_binomial_distribution(n: u64, prior: BetaParams, eps: f64) -> Result<CountDistribution> {
    check_eps(eps)?;
    if n == 0 {
        return Ok(CountDistribution::point_mass(DistKind::BetaBinomial, 0));
    }
    let (a, b) = (prior.alpha(), prior.beta());
    let c = a + b;
    let nf = n as f64;
    let var = nf * a * b * (c + nf) / (c * c * (c + 1.0));
    let law = Law {
        log_pmf: |k| beta_binomial_log_pmf_raw(n, k, a, b),
        max: Some(n),
        log_concave: a >= 1.0 && b >= 1.0,
        mean: nf * a / c,
        sd: var.sqrt(),
    };
    Ok(law.build(DistKind::BetaBinomial, eps))
}

/// Distribution of `X + Y` for independent `X ~ a`, `Y ~ b`.
pub fn convolve(a: &CountDistribution, b: &CountDistribution, eps: f64) -> Result<CountDistribution> {
    check_eps(eps)?;
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let shift_s = short.log_mass.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift_l = long.log_mass.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ls: Vec<f64> = short.log_mass.iter().map(|l| (l - shift_s).exp()).collect();
    let ll: Vec<f64> = long.log_mass.iter().map(|l| (l - shift_l).exp()).collect();
    let len = ls.len() + ll.len() - 1;
    let mut scaled = vec![0.0f64; len];
    for (i, &x) in ls.iter().enumerate() {
        for (acc, &y) in scaled[i..i + ll.len()].iter_mut().zip(&ll) {
            *acc += x * y;
        }
    }
    let shift = shift_s + shift_l;
    let mut log_mass: Vec<f64> = scaled.iter().map(|s| s.ln() + shift).collect();
    // interior underflow: redo the affected entries in log space
    for (k, lm) in log_mass.iter_mut().enumerate() {
        if *lm == f64::NEG_INFINITY {
            *lm = log_conv_at(&short.log_mass, &long.log_mass, k);
        }
    }
    let support_lo = a.support_lo + b.support_lo;

    let mut lo = 0usize;
    let mut hi = len - 1;
    let mut trimmed_lo = 0.0;
    let mut trimmed_hi = 0.0;
    while lo < hi {
        let m = log_mass[lo].exp();
        if trimmed_lo + m > eps / 2.0 {
            break;
        }
        trimmed_lo += m;
        lo += 1;
    }
    while hi > lo {
        let m = log_mass[hi].exp();
        if trimmed_hi + m > eps / 2.0 {
            break;
        }
        trimmed_hi += m;
        hi -= 1;
    }
    let log_mass: Vec<f64> = log_mass[lo..=hi].to_vec();
    debug_assert!(log_mass.iter().all(|l| l.is_finite()));
    Ok(CountDistribution {
        kind: DistKind::Convolution,
        support_lo: support_lo + lo as u64,
        log_mass,
        truncated_lower: a.truncated_lower + b.truncated_lower + trimmed_lo,
        truncated_upper: a.truncated_upper + b.truncated_upper + trimmed_hi,
    })
}

fn log_conv_at(x: &[f64], y: &[f64], k: usize) -> f64 {
    let terms: Vec<f64> = (0..x.len()).filter(|&i| i <= k && k - i < y.len()).map(|i| x[i] + y[k - i]).collect();
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(v: f64) -> Probability {
        Probability::new(v).unwrap()
    }

    #[test]
    fn beta_binomial_high_precision_values() {
        // mpmath, 40 digits
        let cases = [
            (1_254_792, 777_000, 6.079_567_402_617_129, 3.731_092_543_639_449_3, -13.124_996_405_532_371),
            (1_254_792, 5000, 0.1, 99_999.9, -394.302_369_117_008_1),
            (2_000_000, 400, 133.35, 665_510.9, -4.608_485_987_815_865),
            (4_000_000_000, 2_000_000_000, 5e5, 5e5, -15.427_721_506_106_511),
            (100, 37, 0.5, 0.7, -4.894_280_059_656_245),
        ];
        for (n, k, a, b, want) in cases {
            let got = beta_binomial_log_pmf(n, BetaParams::new(a, b).unwrap(), k).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn certainty_at_zero() {
        assert_eq!(binomial_log_pmf(123, p(0.0), 0).unwrap(), 0.0);
        assert_eq!(binomial_log_pmf(123, p(0.0), 1).unwrap(), f64::NEG_INFINITY);
        assert_eq!(binomial_log_pmf(5, p(1.0), 5).unwrap(), 0.0);
        assert!(binomial_log_pmf(5, p(0.5), 6).is_err());
    }

    #[test]
    fn nobody_exposed_la() {
        let l = binomial_log_pmf(2_000_000, p(2e-7), 0).unwrap();
        assert!((l.exp() - 0.670).abs() < 5e-4);
    }

    #[test]
    fn product_form_small_n() {
        let direct = 120.0 * 0.3f64.powi(3) * 0.7f64.powi(7);
        assert_relative_eq!(binomial_log_pmf(10, p(0.3), 3).unwrap().exp(), direct, max_relative = 1e-13);
    }

    #[test]
    fn degenerate_point_masses() {
        let d = binomial_distribution(5, p(1.0), DEFAULT_EPS).unwrap();
        assert_eq!((d.support_lo(), d.support_hi()), (5, 5));
        assert_eq!(d.mass(5), 1.0);
        let z = poisson_distribution(0.0, DEFAULT_EPS).unwrap();
        assert_eq!((z.support_lo(), z.support_hi(), z.mass(0)), (0, 0, 1.0));
    }

    #[test]
    fn eps_and_rate_validation() {
        assert!(binomial_distribution(10, p(0.5), 0.0).is_err());
        assert!(binomial_distribution(10, p(0.5), 1e-5).is_err());
        assert!(poisson_distribution(-1.0, DEFAULT_EPS).is_err());
        assert!(poisson_distribution(f64::NAN, DEFAULT_EPS).is_err());
    }

    #[test]
    fn eighty_two_percent_nobody() {
        let d = binomial_distribution(2_000_000, p(1e-7), 1e-12).unwrap();
        assert!((d.mass(0) - 0.8187).abs() < 1e-4);
        assert!(d.truncated_mass() <= 1e-12);
    }

    #[test]
    fn poisson_rare_event_values() {
        let d = poisson_distribution(0.4, DEFAULT_EPS).unwrap();
        assert_relative_eq!(d.mass(0), (-0.4f64).exp(), max_relative = 1e-15);
        assert!((d.mass(1) - 0.268).abs() < 5e-4);
        let e = poisson_distribution(0.2, DEFAULT_EPS).unwrap();
        assert!((e.mass(0) + e.mass(1) - 0.982).abs() < 5e-4);
    }

    #[test]
    fn beta_binomial_uniform_case() {
        let d = beta_binomial_distribution(2, BetaParams::new(1.0, 1.0).unwrap(), DEFAULT_EPS).unwrap();
        for k in 0..=2 {
            assert_relative_eq!(d.mass(k), 1.0 / 3.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn beta_binomial_reflection_symmetry() {
        let prior = BetaParams::new(3.5, 0.7).unwrap();
        let flipped = BetaParams::new(0.7, 3.5).unwrap();
        for k in 0..=40 {
            let a = beta_binomial_log_pmf(40, prior, k).unwrap();
            let b = beta_binomial_log_pmf(40, flipped, 40 - k).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn beta_binomial_forms_agree_at_switch() {
        // concentration just either side of the four-bracket / rising-factorial switch
        let n = 5000;
        let lo = BetaParams::from_mean_concentration(p(0.3), 1e4).unwrap();
        let hi = BetaParams::from_mean_concentration(p(0.3), 1e4 * (1.0 + 1e-12)).unwrap();
        for k in [1000u64, 1500, 1800] {
            let a = beta_binomial_log_pmf(n, lo, k).unwrap();
            let b = beta_binomial_log_pmf(n, hi, k).unwrap();
            assert!((a - b).abs() < 1e-9, "k={k}: {a} vs {b}");
        }
    }

    #[test]
    fn point_mass_convolution() {
        let a = CountDistribution::point_mass(DistKind::Binomial, 3);
        let b = CountDistribution::point_mass(DistKind::Binomial, 4);
        let c = convolve(&a, &b, DEFAULT_EPS).unwrap();
        assert_eq!((c.support_lo(), c.support_hi(), c.mass(7)), (7, 7, 1.0));
    }

    #[test]
    fn mode_ties_to_smallest() {
        // Bin(3, 1/2): P(1) = P(2) = 3/8
        let d = binomial_distribution(3, p(0.5), DEFAULT_EPS).unwrap();
        assert_eq!(d.mode(), 1);
    }

    #[test]
    fn quantiles_of_point_mass() {
        let d = CountDistribution::point_mass(DistKind::Binomial, 7);
        assert_eq!(d.quantile(p(0.5)), 7);
        let ci = d.central_interval(p(0.95)).unwrap();
        assert_eq!((ci.lo, ci.hi, ci.achieved.value()), (7, 7, 1.0));
        assert!(d.central_interval(p(1.0)).is_err());
    }

    #[test]
    fn unexposed_rr106_arm() {
        let d = binomial_distribution(2_000_000, p(0.000189), DEFAULT_EPS).unwrap();
        assert_eq!(d.mode(), 378);
        let ci = d.central_interval(p(0.9999)).unwrap();
        assert!(ci.achieved.value() >= 0.9999);
        assert!((ci.lo as i64 - 300).abs() <= 5);
    }

    #[test]
    fn cdf_and_upper_tail_are_complementary() {
        let d = binomial_distribution(200, p(0.2), DEFAULT_EPS).unwrap();
        for k in [10u64, 40, 41, 60] {
            assert!((d.cdf(k - 1) + d.upper_tail(k) - 1.0).abs() < 1e-12);
        }
    }
}

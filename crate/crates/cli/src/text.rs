//! Plain-text reports.

use std::fmt::Write;

use anyhow::Result;
use predrisk::classical::{TestResult, TwoByTwo};
use predrisk::cohort::{CausalSpec, TrueCause, Variant};
use predrisk::comparison::{
    lives_saved_bounds, split_vs_counterfactual, summarize, ExposureScenario, LivesSaved, SplitComparison,
};
use predrisk::distributions::CredibleInterval;
use predrisk::predictive::{predictive_exceedance, predictive_split_and_all_low, Calibration, UncertainScenario};
use predrisk::scenario::{ScenarioFile, ScenarioKind, Settings};
use predrisk::{BetaParams, Probability};

pub const CAUSAL_CAUTION: &str = "note: the p-value measures how unusual the difference is under a \
no-difference model. It licenses no claim that group membership caused the outcome.";

/// Six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

fn prob(p: Probability) -> String {
    sig6(p.value())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), sig6)
}

fn interval(i: &CredibleInterval) -> String {
    format!("[{}, {}]", i.lo, i.hi)
}

fn pct(coverage: Probability) -> String {
    let s = format!("{:.6}", coverage.value() * 100.0);
    format!("{}%", s.trim_end_matches('0').trim_end_matches('.'))
}

macro_rules! line {
    ($out:expr, $label:expr, $($val:expr),+) => {{
        write!($out, "{:<28}", $label).unwrap();
        $( write!($out, "{:<15} ", $val).unwrap(); )+
        let trimmed = $out.trim_end_matches(' ').len();
        $out.truncate(trimmed);
        $out.push('\n');
    }};
}

pub fn summary(file: &ScenarioFile, settings: &Settings) -> Result<String> {
    let mut out = String::new();
    if !file.name.is_empty() {
        writeln!(out, "scenario {}", file.name)?;
    }
    if let Some(d) = &file.description {
        writeln!(out, "{d}")?;
    }
    writeln!(out, "coverage {}, eps {:e}", settings.coverage.value(), settings.eps)?;
    match file.kind() {
        ScenarioKind::Exposure(s) => {
            plug_in(&mut out, s, settings)?;
            if let Some(resolved) = file.uncertain(settings)? {
                let (e, u) = resolved.calibration.expect("derived by calibration");
                writeln!(out, "\nparameter uncertainty (priors calibrated to spread ratio {})", sig6(e.target_ratio))?;
                calibration_lines(&mut out, &e, &u);
                predictive(&mut out, &resolved.scenario, settings)?;
            }
        }
        ScenarioKind::Uncertain(u) => {
            writeln!(out, "\nparameter uncertainty")?;
            let (se, su) = u.spread_reports(settings.coverage, settings.eps)?;
            line!(out, "", "exposed", "unexposed");
            line!(out, "prior", beta(u.prior_exposed), beta(u.prior_unexposed));
            line!(out, "spread ratio", sig6(se.ratio), sig6(su.ratio));
            predictive(&mut out, u, settings)?;
        }
        ScenarioKind::Causal(c) => causal(&mut out, c)?,
    }
    Ok(out)
}

fn beta(b: BetaParams) -> String {
    format!("Beta({}, {})", sig6(b.alpha()), sig6(b.beta()))
}

fn plug_in(out: &mut String, s: &ExposureScenario, settings: &Settings) -> Result<()> {
    let eps = settings.eps;
    let sum = summarize(s, eps)?;
    writeln!(out)?;
    line!(out, "per-person relative risk", opt(sum.per_person_rr));
    line!(out, "effective relative risk", opt(sum.effective_rr));
    writeln!(out)?;
    let (ae, au) = s.arms(eps)?;
    let (ie, iu) = (ae.central_interval(settings.coverage)?, au.central_interval(settings.coverage)?);
    line!(out, "", "exposed", "unexposed");
    line!(out, "population", s.n_exposed, s.n_unexposed);
    line!(out, "per-person probability", prob(s.p_exposed), prob(s.p_unexposed));
    line!(out, "P(nobody)", prob(sum.p_nobody_exposed), prob(sum.p_nobody_unexposed));
    line!(out, "P(exactly one)", prob(sum.p_one_exposed), prob(sum.p_one_unexposed));
    line!(
        out,
        "P(nobody or one)",
        sig6(sum.p_nobody_exposed.value() + sum.p_one_exposed.value()),
        sig6(sum.p_nobody_unexposed.value() + sum.p_one_unexposed.value())
    );
    line!(out, "mode", sum.mode_exposed, sum.mode_unexposed);
    line!(out, format!("{} interval", pct(settings.coverage)), interval(&ie), interval(&iu));
    line!(out, "truncated mass", format!("{:.1e}", ae.truncated_mass()), format!("{:.1e}", au.truncated_mass()));

    writeln!(out, "\ncomparison (error bound {:.1e})", sum.error_bound)?;
    line!(out, "P(exposed more)", prob(sum.p_exposed_more));
    line!(out, "P(equal)", prob(sum.p_equal));
    line!(out, "P(unexposed more)", prob(sum.p_unexposed_more));

    let split = split_vs_counterfactual(s, eps)?;
    let saved = lives_saved_bounds(s, settings.coverage, eps)?;
    split_lines(out, &split, &saved, settings.coverage);
    Ok(())
}

fn split_lines(out: &mut String, split: &SplitComparison, saved: &LivesSaved, coverage: Probability) {
    writeln!(out, "\nsplit exposure vs everybody unexposed (error bound {:.1e})", split.error_bound).unwrap();
    line!(out, "", "split", "all low");
    line!(out, "mode", split.mode_split, split.mode_all_low);
    line!(
        out,
        format!("{} interval", pct(coverage)),
        interval(&saved.split_interval),
        interval(&saved.all_low_interval)
    );
    line!(out, "P(split total more)", prob(split.p_split_more));
    line!(out, "P(equal)", prob(split.p_equal));
    line!(out, "P(all-low total more)", prob(split.p_all_low_more));
    writeln!(out, "\nlives saved by removing exposure").unwrap();
    line!(out, "best case", saved.best_case);
    line!(out, "P(split total >= upper end)", prob(saved.tail_prob_best_case));
    line!(out, "most likely", saved.most_likely);
}

fn predictive(out: &mut String, u: &UncertainScenario, settings: &Settings) -> Result<()> {
    let eps = settings.eps;
    let ex = predictive_exceedance(u, eps)?;
    writeln!(out, "\npredictive comparison (error bound {:.1e})", ex.error_bound)?;
    line!(out, "P(exposed more)", sig6(ex.greater));
    line!(out, "P(equal)", sig6(ex.equal));
    line!(out, "P(unexposed more)", sig6(ex.less));
    let (split, all_low) = predictive_split_and_all_low(u, eps)?;
    let cmp = SplitComparison::from_distributions(&split, &all_low);
    let saved = LivesSaved::from_distributions(&split, &all_low, settings.coverage)?;
    split_lines(out, &cmp, &saved, settings.coverage);
    Ok(())
}

fn calibration_lines(out: &mut String, e: &Calibration, u: &Calibration) {
    line!(out, "", "exposed", "unexposed");
    line!(out, "prior", beta(e.prior), beta(u.prior));
    line!(out, "concentration", sig6(e.prior.concentration()), sig6(u.prior.concentration()));
    line!(out, "achieved spread ratio", sig6(e.ratio), sig6(u.ratio));
    if e.degenerate || u.degenerate {
        writeln!(out, "target met without parameter uncertainty in at least one arm").unwrap();
    }
}

pub fn calibration(e: &Calibration, u: &Calibration) -> String {
    let mut out = String::new();
    calibration_lines(&mut out, e, u);
    out
}

fn causal(out: &mut String, c: &CausalSpec) -> Result<()> {
    writeln!(out)?;
    let cause = match c.true_cause {
        TrueCause::ExposureLabel => "exposure label",
        TrueCause::LatentFactor => "latent factor",
        TrueCause::None => "none",
    };
    line!(out, "individuals per group", c.n_per_group);
    line!(out, "true cause", cause);
    if c.true_cause == TrueCause::LatentFactor {
        line!(out, "confounding", sig6(c.confounding));
    }
    line!(out, "baseline probability", prob(c.baseline_p));
    line!(out, "effect probability", prob(c.effect_p));
    let variants: Vec<String> = Variant::all_for(c).iter().map(Variant::name).collect();
    line!(out, "analysis variants", variants.join(", "));
    writeln!(out, "run `predrisk simulate` for rejection rates")?;
    Ok(())
}

pub fn test_result(t: &TwoByTwo, r: &TestResult, rr: Option<f64>, continuity: bool) -> String {
    let mut out = String::new();
    line!(out, "group a", format!("{} / {}", t.cases_a, t.n_a));
    line!(out, "group b", format!("{} / {}", t.cases_b, t.n_b));
    line!(out, "relative risk estimate", opt(rr));
    let label = if continuity { "statistic (corrected)" } else { "statistic" };
    line!(out, label, sig6(r.statistic));
    line!(out, "p-value", prob(r.p_value));
    let decision = if r.reject { "reject equal proportions" } else { "do not reject" };
    line!(out, format!("at alpha {}", sig6(r.alpha.value())), decision);
    out.push_str(CAUSAL_CAUTION);
    out.push('\n');
    out
}

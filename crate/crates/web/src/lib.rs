//! Browser bindings. Every export returns a JSON string; the page parses it.

use predrisk::classical::{relative_risk_estimate, two_proportion_test, TwoByTwo};
use predrisk::comparison::{effective_rr, exceedance, ExposureScenario, LivesSaved, SplitComparison};
use predrisk::distributions::{CountDistribution, DEFAULT_EPS};
use predrisk::predictive::{predictive_arms, predictive_split_and_all_low, UncertainScenario};
use predrisk::{BetaParams, Probability};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct Curve {
    pub lo: u64,
    pub masses: Vec<f64>,
    pub mode: u64,
}

impl From<&CountDistribution> for Curve {
    fn from(d: &CountDistribution) -> Curve {
        Curve { lo: d.support_lo(), masses: d.masses(), mode: d.mode() }
    }
}

#[derive(Serialize)]
pub struct ArmCurves {
    pub exposed: Curve,
    pub unexposed: Curve,
    pub p_exposed_more: f64,
    pub p_equal: f64,
    pub p_unexposed_more: f64,
    pub effective_rr: Option<f64>,
}

#[derive(Serialize)]
pub struct SplitCurves {
    pub split: Curve,
    pub all_low: Curve,
    pub comparison: SplitComparison,
    pub lives_saved: LivesSaved,
}

fn scenario(n_exposed: u64, n_unexposed: u64, p_exposed: f64, p_unexposed: f64) -> Result<ExposureScenario, String> {
    ExposureScenario::new(
        n_exposed,
        n_unexposed,
        Probability::named("p_exposed", p_exposed).map_err(|e| e.to_string())?,
        Probability::named("p_unexposed", p_unexposed).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

/// `concentration <= 0` keeps the plug-in binomials.
fn uncertain(s: &ExposureScenario, concentration: f64) -> Result<Option<UncertainScenario>, String> {
    if concentration <= 0.0 {
        return Ok(None);
    }
    let prior = |p| BetaParams::from_mean_concentration(p, concentration).map_err(|e| e.to_string());
    Ok(Some(UncertainScenario {
        n_exposed: s.n_exposed,
        n_unexposed: s.n_unexposed,
        prior_exposed: prior(s.p_exposed)?,
        prior_unexposed: prior(s.p_unexposed)?,
    }))
}

pub fn arm_curves_inner(
    n_exposed: u64,
    n_unexposed: u64,
    p_exposed: f64,
    p_unexposed: f64,
    concentration: f64,
) -> Result<ArmCurves, String> {
    let s = scenario(n_exposed, n_unexposed, p_exposed, p_unexposed)?;
    let (e, u) = match uncertain(&s, concentration)? {
        Some(u) => predictive_arms(&u, DEFAULT_EPS),
        None => s.arms(DEFAULT_EPS),
    }
    .map_err(|e| e.to_string())?;
    let ex = exceedance(&e, &u);
    Ok(ArmCurves {
        exposed: (&e).into(),
        unexposed: (&u).into(),
        p_exposed_more: ex.greater,
        p_equal: ex.equal,
        p_unexposed_more: ex.less,
        effective_rr: effective_rr(&s),
    })
}

pub fn split_curves_inner(
    n_exposed: u64,
    n_unexposed: u64,
    p_exposed: f64,
    p_unexposed: f64,
    concentration: f64,
    coverage: f64,
) -> Result<SplitCurves, String> {
    let s = scenario(n_exposed, n_unexposed, p_exposed, p_unexposed)?;
    let coverage = Probability::named("coverage", coverage).map_err(|e| e.to_string())?;
    let (split, all_low) = match uncertain(&s, concentration)? {
        Some(u) => predictive_split_and_all_low(&u, DEFAULT_EPS),
        None => predrisk::comparison::split_and_all_low(&s, DEFAULT_EPS),
    }
    .map_err(|e| e.to_string())?;
    Ok(SplitCurves {
        split: (&split).into(),
        all_low: (&all_low).into(),
        comparison: SplitComparison::from_distributions(&split, &all_low),
        lives_saved: LivesSaved::from_distributions(&split, &all_low, coverage).map_err(|e| e.to_string())?,
    })
}

#[derive(Serialize)]
pub struct PValue {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub relative_risk: Option<f64>,
}

pub fn pvalue_inner(cases_a: u64, n_a: u64, cases_b: u64, n_b: u64, continuity: bool) -> Result<PValue, String> {
    let t = TwoByTwo::new(cases_a, n_a, cases_b, n_b).map_err(|e| e.to_string())?;
    let r = two_proportion_test(&t, continuity, Probability::new(0.05).expect("constant"));
    Ok(PValue {
        statistic: r.statistic,
        p_value: r.p_value.value(),
        reject: r.reject,
        relative_risk: relative_risk_estimate(&t),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

// f64 arguments: JS numbers above 2^32 do not fit u32 and BigInt is awkward
// from a form field.

#[wasm_bindgen]
pub fn arm_curves(
    n_exposed: f64,
    n_unexposed: f64,
    p_exposed: f64,
    p_unexposed: f64,
    concentration: f64,
) -> Result<String, JsValue> {
    to_js(arm_curves_inner(n_exposed as u64, n_unexposed as u64, p_exposed, p_unexposed, concentration))
}

#[wasm_bindgen]
pub fn split_curves(
    n_exposed: f64,
    n_unexposed: f64,
    p_exposed: f64,
    p_unexposed: f64,
    concentration: f64,
    coverage: f64,
) -> Result<String, JsValue> {
    to_js(split_curves_inner(n_exposed as u64, n_unexposed as u64, p_exposed, p_unexposed, concentration, coverage))
}

#[wasm_bindgen]
pub fn pvalue(cases_a: f64, n_a: f64, cases_b: f64, n_b: f64, continuity: bool) -> Result<String, JsValue> {
    to_js(pvalue_inner(cases_a as u64, n_a as u64, cases_b as u64, n_b as u64, continuity))
}

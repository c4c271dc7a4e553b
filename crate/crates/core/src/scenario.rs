//! JSON scenario files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "la_rr2",
//!   "exposure_scenario": {
//!     "n_exposed": 2000000, "n_unexposed": 2000000,
//!     "p_exposed": 2e-7, "p_unexposed": 1e-7
//!   },
//!   "controls": { "coverage": 0.9999 }
//! }
//! ```
//!
//! Exactly one of `exposure_scenario`, `uncertain_scenario` and `causal_spec`
//! must be present. An exposure scenario may carry `calibration` to derive
//! priors for the predictive analyses.

use serde::{Deserialize, Serialize};

use crate::cohort::{CausalSpec, StudyOptions};
use crate::comparison::ExposureScenario;
use crate::distributions::{check_coverage, check_eps, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::predictive::{Calibration, UncertainScenario};
use crate::probability::Probability;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_COVERAGE: f64 = 0.9999;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_REPLICATIONS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0;

/// Optional run settings; command-line flags take precedence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Controls {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Probability>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Probability>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuity: Option<bool>,
}

/// [`Controls`] with every default filled in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub coverage: Probability,
    pub eps: f64,
    pub seed: u64,
    pub replications: u64,
    pub alpha: Probability,
    pub continuity: bool,
}

impl Controls {
    /// `self` with every field set in `over` replaced.
    pub fn overridden_by(&self, over: &Controls) -> Controls {
        Controls {
            coverage: over.coverage.or(self.coverage),
            eps: over.eps.or(self.eps),
            seed: over.seed.or(self.seed),
            replications: over.replications.or(self.replications),
            alpha: over.alpha.or(self.alpha),
            continuity: over.continuity.or(self.continuity),
        }
    }

    pub fn settings(&self) -> Result<Settings> {
        let field =
            |name: &str, e: Error| Error::Scenario { field: format!("controls.{name}"), message: e.to_string() };
        let s = Settings {
            coverage: self.coverage.unwrap_or(Probability::new(DEFAULT_COVERAGE)?),
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            replications: self.replications.unwrap_or(DEFAULT_REPLICATIONS),
            alpha: self.alpha.unwrap_or(Probability::new(DEFAULT_ALPHA)?),
            continuity: self.continuity.unwrap_or(true),
        };
        check_coverage(s.coverage).map_err(|e| field("coverage", e))?;
        check_eps(s.eps).map_err(|e| field("eps", e))?;
        if s.replications == 0 {
            return Err(Error::Scenario {
                field: "controls.replications".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(s)
    }
}

impl Settings {
    pub fn study(&self) -> StudyOptions {
        StudyOptions {
            replications: self.replications,
            alpha: self.alpha,
            seed: self.seed,
            continuity: self.continuity,
        }
    }

    /// The settings as explicit controls, for lossless echo.
    pub fn as_controls(&self) -> Controls {
        Controls {
            coverage: Some(self.coverage),
            eps: Some(self.eps),
            seed: Some(self.seed),
            replications: Some(self.replications),
            alpha: Some(self.alpha),
            continuity: Some(self.continuity),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationTarget {
    /// Predictive over plug-in interval width, at the run's coverage.
    pub target_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exposure_scenario: Option<ExposureScenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertain_scenario: Option<UncertainScenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal_spec: Option<CausalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationTarget>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub controls: Controls,
}

fn is_default(c: &Controls) -> bool {
    *c == Controls::default()
}

#[derive(Clone, Copy, Debug)]
pub enum ScenarioKind<'a> {
    Exposure(&'a ExposureScenario),
    Uncertain(&'a UncertainScenario),
    Causal(&'a CausalSpec),
}

/// An uncertain scenario, possibly derived by calibration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolvedUncertain {
    pub scenario: UncertainScenario,
    /// `(exposed, unexposed)` calibrations when the priors were derived.
    pub calibration: Option<(Calibration, Calibration)>,
}

fn at(field: &str, e: Error) -> Error {
    match e {
        Error::Scenario { .. } => e,
        e => Error::Scenario { field: field.to_string(), message: e.to_string() },
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<ScenarioFile> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." || path == "?" { "<document>".to_string() } else { path };
            Error::Scenario { field, message: e.into_inner().to_string() }
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn to_json_compact(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Scenario {
                field: "schema_version".into(),
                message: format!(
                    "unsupported version {}; this build reads version {SCHEMA_VERSION}",
                    self.schema_version
                ),
            });
        }
        let present = [self.exposure_scenario.is_some(), self.uncertain_scenario.is_some(), self.causal_spec.is_some()];
        if present.iter().filter(|&&p| p).count() != 1 {
            return Err(Error::Scenario {
                field: "exposure_scenario|uncertain_scenario|causal_spec".into(),
                message: "exactly one scenario kind must be present".into(),
            });
        }
        match self.kind() {
            ScenarioKind::Exposure(s) => s.validate().map_err(|e| at("exposure_scenario", e))?,
            ScenarioKind::Uncertain(u) => u.validate().map_err(|e| at("uncertain_scenario", e))?,
            ScenarioKind::Causal(c) => c.validate().map_err(|e| at("causal_spec", e))?,
        }
        if let Some(cal) = self.calibration {
            if self.exposure_scenario.is_none() {
                return Err(Error::Scenario {
                    field: "calibration".into(),
                    message: "only applies to an exposure_scenario".into(),
                });
            }
            if !(cal.target_ratio.is_finite() && cal.target_ratio >= 1.0) {
                return Err(Error::Scenario {
                    field: "calibration.target_ratio".into(),
                    message: format!("{} must be a finite ratio of at least 1", cal.target_ratio),
                });
            }
        }
        self.controls.settings()?;
        Ok(())
    }

    pub fn kind(&self) -> ScenarioKind<'_> {
        if let Some(s) = &self.exposure_scenario {
            ScenarioKind::Exposure(s)
        } else if let Some(u) = &self.uncertain_scenario {
            ScenarioKind::Uncertain(u)
        } else {
            ScenarioKind::Causal(self.causal_spec.as_ref().expect("validated"))
        }
    }

    /// The scenario's uncertain form: given directly, or calibrated from an
    /// exposure scenario. `None` without priors or calibration.
    pub fn uncertain(&self, settings: &Settings) -> Result<Option<ResolvedUncertain>> {
        if let Some(u) = self.uncertain_scenario {
            return Ok(Some(ResolvedUncertain { scenario: u, calibration: None }));
        }
        match (self.exposure_scenario, self.calibration) {
            (Some(s), Some(cal)) => {
                let (u, e, n) = UncertainScenario::calibrated(&s, cal.target_ratio, settings.coverage, settings.eps)?;
                Ok(Some(ResolvedUncertain { scenario: u, calibration: Some((e, n)) }))
            }
            _ => Ok(None),
        }
    }

    /// A copy whose controls are exactly `settings`.
    pub fn with_settings(&self, settings: &Settings) -> ScenarioFile {
        ScenarioFile { controls: settings.as_controls(), ..self.clone() }
    }
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// Names of the example scenarios shipped with the crate.
        pub const BUNDLED: &[&str] = &[$($name),*];

        /// JSON source of a bundled scenario.
        pub fn bundled_source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../../../scenarios/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

bundled!("la_rr2", "la_rr106", "ny_rr2", "us_rr2", "null", "banana", "proxy_q1", "proxy_q07", "latent",);

pub fn bundled(name: &str) -> Option<ScenarioFile> {
    bundled_source(name).map(|src| ScenarioFile::from_json(src).expect("bundled scenarios are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_field(text: &str) -> String {
        match ScenarioFile::from_json(text).unwrap_err() {
            Error::Scenario { field, .. } => field,
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn every_bundled_scenario_parses_and_round_trips() {
        for name in BUNDLED {
            let f = bundled(name).unwrap();
            assert_eq!(ScenarioFile::from_json(&f.to_json_compact()).unwrap(), f, "{name}");
        }
    }

    #[test]
    fn failing_field_is_named() {
        let base = r#"{"schema_version":1,"exposure_scenario":
            {"n_exposed":10,"n_unexposed":10,"p_exposed":1.5,"p_unexposed":0.1}}"#;
        assert_eq!(err_field(base), "exposure_scenario.p_exposed");
        assert_eq!(err_field(&base.replace("1.5", "0.5").replace(":1,", ":2,")), "schema_version");
        assert_eq!(err_field(r#"{"schema_version":1}"#), "exposure_scenario|uncertain_scenario|causal_spec");
        let zero = base.replace("1.5", "0.5").replace("\"n_exposed\":10", "\"n_exposed\":0");
        assert_eq!(err_field(&zero), "exposure_scenario");
        let typo = base.replace("p_exposed\":1.5", "p_exposd\":0.5");
        assert_eq!(err_field(&typo), "exposure_scenario.p_exposd");
        assert_eq!(err_field("{"), "<document>");
    }

    #[test]
    fn controls_are_checked() {
        let text = r#"{"schema_version":1,"exposure_scenario":
            {"n_exposed":10,"n_unexposed":10,"p_exposed":0.5,"p_unexposed":0.1},
            "controls":{"eps":0.5}}"#;
        assert_eq!(err_field(text), "controls.eps");
    }

    #[test]
    fn overrides_take_precedence() {
        let file = Controls { seed: Some(1), eps: Some(1e-10), ..Default::default() };
        let flags = Controls { seed: Some(9), ..Default::default() };
        let s = file.overridden_by(&flags).settings().unwrap();
        assert_eq!((s.seed, s.eps, s.continuity), (9, 1e-10, true));
    }
}

//! Figure data as CSV.
//!
//! Each table starts with `# key: value` metadata lines, then an RFC 4180
//! header and one row per count over the union of the column supports. A cell
//! is empty where the count lies outside that column's stored support.
//!
//! | figure | columns                         | needs               |
//! |--------|---------------------------------|---------------------|
//! | 1      | `mass_exposed`, `mass_unexposed` | exposure scenario   |
//! | 2      | `mass_exposed`, `mass_unexposed` | priors/calibration  |
//! | 3      | `mass_total_split`, `mass_all_low` | exposure scenario |
//! | 4      | `mass_total_split`, `mass_all_low` | priors/calibration |
//!
//! The `scenario` metadata line is the compact JSON of the input file with
//! its controls resolved, so the table can be regenerated from itself.

use crate::cohort::ReplicationReport;
use crate::comparison::split_and_all_low;
use crate::distributions::CountDistribution;
use crate::error::{Error, Result};
use crate::predictive::{predictive_arms, predictive_split_and_all_low};
use crate::scenario::{ScenarioFile, ScenarioKind, Settings};

pub const TOOL_VERSION: &str = concat!("predrisk ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub figure: u8,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<(String, CountDistribution)>,
}

fn wrong_kind(figure: u8, what: &str) -> Error {
    Error::Scenario {
        field: "exposure_scenario|uncertain_scenario".into(),
        message: format!("figure {figure} needs {what}"),
    }
}

impl FigureTable {
    pub fn build(file: &ScenarioFile, figure: u8, settings: &Settings) -> Result<FigureTable> {
        let eps = settings.eps;
        let plug_in = || match file.kind() {
            ScenarioKind::Exposure(s) => Ok(*s),
            _ => Err(wrong_kind(figure, "an exposure_scenario")),
        };
        let predictive = || {
            if let ScenarioKind::Causal(_) = file.kind() {
                return Err(wrong_kind(figure, "an uncertain_scenario"));
            }
            file.uncertain(settings)?.ok_or_else(|| Error::Scenario {
                field: "calibration".into(),
                message: format!("figure {figure} needs priors: give an uncertain_scenario or a calibration block"),
            })
        };
        let arms = ["mass_exposed", "mass_unexposed"];
        let totals = ["mass_total_split", "mass_all_low"];
        let mut metadata = vec![];
        let (names, (a, b)) = match figure {
            1 => (arms, plug_in()?.arms(eps)?),
            3 => (totals, split_and_all_low(&plug_in()?, eps)?),
            2 | 4 => {
                let resolved = predictive()?;
                if let Some((e, u)) = resolved.calibration {
                    metadata.push(("calibrated_prior_exposed".into(), serde_json::to_string(&e.prior).unwrap()));
                    metadata.push(("calibrated_prior_unexposed".into(), serde_json::to_string(&u.prior).unwrap()));
                    metadata.push(("calibrated_ratio".into(), format!("{} {}", e.ratio, u.ratio)));
                }
                if figure == 2 {
                    (arms, predictive_arms(&resolved.scenario, eps)?)
                } else {
                    (totals, predictive_split_and_all_low(&resolved.scenario, eps)?)
                }
            }
            _ => {
                return Err(Error::Scenario {
                    field: "figure".into(),
                    message: format!("unknown figure {figure}; expected 1, 2, 3 or 4"),
                })
            }
        };
        let columns = vec![(names[0].to_string(), a), (names[1].to_string(), b)];

        let mut head = vec![
            ("tool".to_string(), TOOL_VERSION.to_string()),
            ("figure".into(), figure.to_string()),
            ("eps".into(), format!("{eps:e}")),
            ("scenario".into(), file.with_settings(settings).to_json_compact()),
        ];
        head.append(&mut metadata);
        for (name, d) in &columns {
            head.push((format!("support {name}"), format!("{}..={}", d.support_lo(), d.support_hi())));
            head.push((
                format!("truncated {name}"),
                format!("lower={:e} upper={:e}", d.truncated_lower(), d.truncated_upper()),
            ));
        }
        Ok(FigureTable { figure, metadata: head, columns })
    }

    pub fn count_range(&self) -> (u64, u64) {
        let lo = self.columns.iter().map(|(_, d)| d.support_lo()).min().unwrap_or(0);
        let hi = self.columns.iter().map(|(_, d)| d.support_hi()).max().unwrap_or(0);
        (lo, hi)
    }

    pub fn to_csv(&self) -> String {
        let mut out = metadata_block(&self.metadata);
        let mut w = csv::Writer::from_writer(vec![]);
        let mut header = vec!["count".to_string()];
        header.extend(self.columns.iter().map(|(n, _)| n.clone()));
        w.write_record(&header).expect("in-memory write");
        let (lo, hi) = self.count_range();
        for k in lo..=hi {
            let mut row = vec![k.to_string()];
            for (_, d) in &self.columns {
                let inside = k >= d.support_lo() && k <= d.support_hi();
                row.push(if inside { format!("{:e}", d.mass(k)) } else { String::new() });
            }
            w.write_record(&row).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("ascii"));
        out
    }
}

fn metadata_block(items: &[(String, String)]) -> String {
    items.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

/// The scenario echoed in a table's metadata block.
pub fn scenario_from_metadata(text: &str) -> Result<ScenarioFile> {
    let line =
        text.lines().take_while(|l| l.starts_with('#')).find_map(|l| l.strip_prefix("# scenario: ")).ok_or_else(
            || Error::Scenario { field: "# scenario".into(), message: "no scenario metadata line".into() },
        )?;
    ScenarioFile::from_json(line)
}

/// Replication report CSV: columns `variant`, `rejection_rate`, `mean_p`.
pub fn report_csv(report: &ReplicationReport, file: &ScenarioFile, settings: &Settings) -> String {
    let mut out = metadata_block(&[
        ("tool".to_string(), TOOL_VERSION.to_string()),
        ("replications".into(), report.replications.to_string()),
        ("seed".into(), settings.seed.to_string()),
        ("alpha".into(), settings.alpha.value().to_string()),
        ("scenario".into(), file.with_settings(settings).to_json_compact()),
    ]);
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["variant", "rejection_rate", "mean_p"]).expect("in-memory write");
    for v in &report.variants {
        w.write_record([v.variant.clone(), v.rejection_rate.value().to_string(), v.mean_p.value().to_string()])
            .expect("in-memory write");
    }
    out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("ascii"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{bundled, Controls};

    #[test]
    fn figure_one_la_rr2_rows() {
        let file = bundled("la_rr2").unwrap();
        let settings = file.controls.settings().unwrap();
        let t = FigureTable::build(&file, 1, &settings).unwrap();
        let csv = t.to_csv();
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "count,mass_exposed,mass_unexposed");
        assert!(body[1].starts_with("0,6.703"), "{}", body[1]);
    }

    #[test]
    fn predictive_figures_need_priors() {
        let file = bundled("la_rr2").unwrap();
        let settings = Controls::default().settings().unwrap();
        let err = FigureTable::build(&file, 2, &settings).unwrap_err();
        assert!(matches!(err, Error::Scenario { ref field, .. } if field == "calibration"), "{err:?}");
        assert!(FigureTable::build(&file, 5, &settings).is_err());
    }

    #[test]
    fn metadata_regenerates_table() {
        let file = bundled("us_rr2").unwrap();
        let settings =
            file.controls.overridden_by(&Controls { eps: Some(1e-10), ..Default::default() }).settings().unwrap();
        let first = FigureTable::build(&file, 3, &settings).unwrap().to_csv();
        let echoed = scenario_from_metadata(&first).unwrap();
        let again = FigureTable::build(&echoed, 3, &echoed.controls.settings().unwrap()).unwrap().to_csv();
        assert_eq!(first, again);
    }
}

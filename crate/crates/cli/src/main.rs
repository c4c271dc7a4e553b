use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use predrisk::classical::{relative_risk_estimate, two_proportion_test, TwoByTwo};
use predrisk::cohort::simulate;
use predrisk::figure::{report_csv, FigureTable};
use predrisk::predictive::UncertainScenario;
use predrisk::scenario::{bundled_source, Controls, ScenarioFile, ScenarioKind, Settings, BUNDLED};
use predrisk::Probability;

mod text;

#[derive(Parser)]
#[command(name = "predrisk", version, about = "Population-level count distributions from per-person risks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the comparison summary of a scenario.
    Summarize {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
        #[command(flatten)]
        exact: ExactFlags,
    },
    /// Write the data behind figure 1, 2, 3 or 4 as CSV.
    Figure {
        scenario: String,
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        figure: u8,
        #[command(flatten)]
        exact: ExactFlags,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-proportion test on observed counts.
    Pvalue {
        cases_a: u64,
        n_a: u64,
        cases_b: u64,
        n_b: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        no_continuity: bool,
    },
    /// Replicate a causal spec and report rejection rates as CSV.
    Simulate {
        spec: String,
        #[arg(long)]
        replications: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        no_continuity: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive beta priors for an exposure scenario; prints an uncertain-scenario file.
    Calibrate {
        scenario: String,
        /// Predictive over plug-in interval width; defaults to the file's calibration block.
        #[arg(long)]
        target_ratio: Option<f64>,
        #[command(flatten)]
        exact: ExactFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExactFlags {
    /// Central interval coverage.
    #[arg(long)]
    coverage: Option<f64>,
    /// Truncation tolerance for stored supports.
    #[arg(long)]
    eps: Option<f64>,
}

impl ExactFlags {
    fn controls(&self) -> Result<Controls> {
        Ok(Controls {
            coverage: self.coverage.map(|c| Probability::named("--coverage", c)).transpose()?,
            eps: self.eps,
            ..Default::default()
        })
    }
}

fn load(arg: &str) -> Result<ScenarioFile> {
    let path = Path::new(arg);
    let text = if path.exists() {
        std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?
    } else if let Some(src) = bundled_source(arg) {
        src.to_string()
    } else {
        bail!("{arg}: no such file or bundled scenario (bundled: {})", BUNDLED.join(", "));
    };
    ScenarioFile::from_json(&text).with_context(|| format!("in {arg}"))
}

fn resolve(file: &ScenarioFile, flags: &Controls) -> Result<Settings> {
    Ok(file.controls.overridden_by(flags).settings()?)
}

/// Writes `contents` to `out` through a temporary file in the same directory,
/// or to stdout.
fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    let Some(path) = out else {
        std::io::stdout().write_all(contents.as_bytes())?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Summarize { scenario, exact } => {
            let file = load(&scenario)?;
            let settings = resolve(&file, &exact.controls()?)?;
            print!("{}", text::summary(&file, &settings)?);
        }
        Command::Figure { scenario, figure, exact, out } => {
            let file = load(&scenario)?;
            let settings = resolve(&file, &exact.controls()?)?;
            let table = FigureTable::build(&file, figure, &settings)?;
            emit(out.as_deref(), &table.to_csv())?;
        }
        Command::Pvalue { cases_a, n_a, cases_b, n_b, alpha, no_continuity } => {
            let t = TwoByTwo::new(cases_a, n_a, cases_b, n_b)?;
            let alpha = Probability::named("--alpha", alpha)?;
            let result = two_proportion_test(&t, !no_continuity, alpha);
            print!("{}", text::test_result(&t, &result, relative_risk_estimate(&t), !no_continuity));
        }
        Command::Simulate { spec, replications, seed, alpha, no_continuity, out } => {
            let file = load(&spec)?;
            let ScenarioKind::Causal(causal) = file.kind() else {
                bail!("{spec}: simulate needs a causal_spec");
            };
            let flags = Controls {
                replications,
                seed,
                alpha: alpha.map(|a| Probability::named("--alpha", a)).transpose()?,
                continuity: no_continuity.then_some(false),
                ..Default::default()
            };
            let settings = resolve(&file, &flags)?;
            let report = simulate(causal, &settings.study())?;
            emit(out.as_deref(), &report_csv(&report, &file, &settings))?;
        }
        Command::Calibrate { scenario, target_ratio, exact, out } => {
            let file = load(&scenario)?;
            let ScenarioKind::Exposure(s) = file.kind() else {
                bail!("{scenario}: calibrate needs an exposure_scenario");
            };
            let Some(target) = target_ratio.or(file.calibration.map(|c| c.target_ratio)) else {
                bail!("{scenario}: give --target-ratio or a calibration block");
            };
            let settings = resolve(&file, &exact.controls()?)?;
            let (u, e, n) = UncertainScenario::calibrated(s, target, settings.coverage, settings.eps)?;
            eprint!("{}", text::calibration(&e, &n));
            let calibrated = ScenarioFile {
                name: format!("{}_calibrated", file.name).trim_start_matches('_').to_string(),
                exposure_scenario: None,
                uncertain_scenario: Some(u),
                calibration: None,
                ..file.with_settings(&settings)
            };
            emit(out.as_deref(), &(calibrated.to_json_pretty() + "\n"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

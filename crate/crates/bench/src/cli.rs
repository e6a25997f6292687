//! Command-line interface: `run`, `compare` and `grid` subcommands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{read_settings_file, ExperimentConfig, Settings};
use crate::error::{BenchError, Result};
use crate::experiment;
use crate::output::format_number;

#[derive(Debug, Parser)]
#[command(name = "restart-bench", version, about = "Run and compare restart schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one method and write its trace.
    Run(Flags),
    /// Run several methods at the same budget and write a summary.
    Compare(Flags),
    /// Run the logarithmic grid of restart schedules.
    Grid(Flags),
}

/// Flags shared by every subcommand. Values override the `--config` file.
#[derive(Debug, Args, Default)]
pub struct Flags {
    /// `key=value` settings file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// quadratic, norm-power, norm, dataset or synthetic.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// csv or libsvm.
    #[arg(long = "dataset-format")]
    pub dataset_format: Option<String>,
    /// least-squares, logistic, lasso or dual-svm.
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long)]
    pub method: Option<String>,
    /// Comma-separated list for `compare`.
    #[arg(long)]
    pub methods: Option<String>,
    /// Inner-iteration budget.
    #[arg(long = "N")]
    pub n: Option<String>,
    /// Initial Lipschitz estimate.
    #[arg(long = "L0")]
    pub l0: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// Schedule constant.
    #[arg(long = "C")]
    pub constant: Option<String>,
    /// Schedule growth rate.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub eps0: Option<String>,
    #[arg(long = "f-star")]
    pub f_star: Option<String>,
    /// Trace file for `run`, directory for `compare` and `grid`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub dim: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long)]
    pub power: Option<String>,
    #[arg(long)]
    pub radius: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub rows: Option<String>,
    #[arg(long)]
    pub cols: Option<String>,
    #[arg(long)]
    pub conditioning: Option<String>,
    #[arg(long = "reference-iterations")]
    pub reference_iterations: Option<String>,
}

impl Flags {
    /// Merges the settings file (if any) with the flags.
    pub fn settings(&self) -> Result<Settings> {
        let mut settings = match &self.config {
            Some(path) => read_settings_file(path)?,
            None => Settings::new(),
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let pairs = [
            ("problem", self.problem.clone()),
            ("dataset", path(&self.dataset)),
            ("dataset-format", self.dataset_format.clone()),
            ("loss", self.loss.clone()),
            ("method", self.method.clone()),
            ("methods", self.methods.clone()),
            ("N", self.n.clone()),
            ("L0", self.l0.clone()),
            ("seed", self.seed.clone()),
            ("gamma", self.gamma.clone()),
            ("C", self.constant.clone()),
            ("alpha", self.alpha.clone()),
            ("eps0", self.eps0.clone()),
            ("f-star", self.f_star.clone()),
            ("out", path(&self.out)),
            ("format", self.format.clone()),
            ("dim", self.dim.clone()),
            ("kappa", self.kappa.clone()),
            ("power", self.power.clone()),
            ("radius", self.radius.clone()),
            ("lambda", self.lambda.clone()),
            ("rows", self.rows.clone()),
            ("cols", self.cols.clone()),
            ("conditioning", self.conditioning.clone()),
            ("reference-iterations", self.reference_iterations.clone()),
        ];
        for (key, value) in pairs {
            if let Some(value) = value {
                settings.insert(key.to_string(), value);
            }
        }
        Ok(settings)
    }

    pub fn config(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::from_settings(self.settings()?)
    }
}

fn gap_text(gap: Option<f64>) -> String {
    gap.map(format_number).unwrap_or_else(|| "unknown".into())
}

/// Executes a parsed command, printing a short report to stdout.
pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(flags) => {
            let config = flags.config()?;
            let report = experiment::run(&config)?;
            let trace = &report.run.trace;
            println!("method: {}", report.run.method);
            println!("iterations: {}", trace.iterations());
            println!("final f: {}", format_number(trace.final_value()));
            println!("final gap: {}", gap_text(trace.final_gap()));
            println!("restarts: {}", trace.restart_count());
            if let (Some(envelope), Some(value)) = (report.run.envelope, report.run.envelope_value()) {
                println!("envelope ({}): {}", envelope.kind(), format_number(value));
            }
            for diagnostic in &trace.diagnostics {
                println!("diagnostic: {diagnostic:?}");
            }
            println!("trace: {}", report.path.display());
            Ok(())
        }
        Command::Compare(flags) => {
            let config = flags.config()?;
            let report = experiment::compare(&config)?;
            for row in &report.rows {
                match &row.outcome {
                    Ok(run) => println!("{:<10} final gap {}", row.method.name(), gap_text(run.final_gap())),
                    Err(message) => println!("{:<10} FAILED: {message}", row.method.name()),
                }
            }
            println!("summary: {}", report.summary_path.display());
            match report.failures() {
                0 => Ok(()),
                failed => Err(BenchError::PartialFailure {
                    failed,
                    total: report.rows.len(),
                }),
            }
        }
        Command::Grid(flags) => {
            let config = flags.config()?;
            let report = experiment::grid(&config)?;
            let outcome = report.outcome();
            println!(
                "schemes run: {}, skipped: {}, inner iterations: {}",
                outcome.runs.len(),
                outcome.skipped.len(),
                outcome.total_inner_iterations
            );
            println!("best scheme: S({},{})", outcome.best.0, outcome.best.1);
            println!("best final gap: {}", gap_text(report.run.final_gap()));
            if let Some(value) = report.run.envelope_value() {
                println!("envelope: {}", format_number(value));
            }
            println!("summary: {}", report.summary_path.display());
            Ok(())
        }
    }
}

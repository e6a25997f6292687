//! Problem construction, method dispatch and the `run` / `compare` / `grid`
//! drivers.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use restart_core::bounds::{universal_constant, BoundEnvelope, ACCELERATED_CONSTANT};
use restart_core::problems::{
    load_dataset, make_dual_svm, make_lasso, make_least_squares, make_logistic, make_norm, make_norm_power,
    make_quadratic, reference_optimum, synthetic_classification, ProblemInstance,
};
use restart_core::restarts::{
    adaptive_grid, criterion_restart, default_criterion_gamma, h_restart, monotone_restart, optimal_schedule_holder,
    optimal_schedule_smooth, restart_scheduled, GridOutcome, Schedule,
};
use restart_core::solvers::{accelerated, gradient_descent};
use restart_core::{DerivedConditioning, Trace};
use serde_json::{json, Map, Value};

use crate::config::{DataSource, ExperimentConfig, Loss, MethodKind, OutputFormat, ProblemConfig};
use crate::error::{BenchError, Result};
use crate::output::{format_number, json_number, trace_csv, trace_json, write_atomic};

/// Gradient-mapping tolerance of reference solves.
const REFERENCE_TOLERANCE: f64 = 1e-12;

/// Builds the problem instance a configuration describes.
pub fn build_problem(config: &ExperimentConfig) -> Result<ProblemInstance> {
    let mut problem = match &config.problem {
        ProblemConfig::Quadratic { dim, kappa } => make_quadratic(*dim, *kappa, config.seed)?,
        ProblemConfig::NormPower { dim, power, radius } => make_norm_power(*dim, *power, *radius)?,
        ProblemConfig::Norm { dim } => make_norm(*dim)?,
        ProblemConfig::Data {
            source,
            loss,
            lambda,
            reference_iterations,
        } => {
            let data = match source {
                DataSource::File { path, format } => load_dataset(path, *format, None)?,
                DataSource::Synthetic {
                    rows,
                    cols,
                    conditioning,
                } => synthetic_classification(*rows, *cols, *conditioning, config.seed)?,
            };
            let mut problem = match loss {
                Loss::LeastSquares => make_least_squares(&data)?,
                Loss::Logistic => make_logistic(&data)?,
                Loss::Lasso => make_lasso(&data, *lambda)?,
                Loss::DualSvm => make_dual_svm(&data, *lambda)?,
            };
            if problem.f_star.is_none() && *reference_iterations > 0 {
                if let Some(lipschitz) = problem.lipschitz.filter(|l| *l > 0.0) {
                    let reference = reference_optimum(
                        problem.oracle.as_ref(),
                        &problem.initial_point,
                        lipschitz,
                        *reference_iterations,
                        REFERENCE_TOLERANCE,
                    )?;
                    problem = problem.with_reference(reference);
                }
            }
            problem
        }
    };
    if let Some(f_star) = config.params.f_star {
        problem.f_star = Some(f_star);
        if let Some(reg) = problem.regularity.as_mut() {
            reg.f_star = Some(f_star);
        }
    }
    Ok(problem)
}

/// A method with every parameter resolved against the problem.
#[derive(Debug, Clone)]
pub struct Plan {
    pub method: MethodKind,
    step: Step,
    pub envelope: Option<BoundEnvelope>,
}

#[derive(Debug, Clone)]
enum Step {
    Grad,
    Acc,
    Mono,
    Restart(Schedule),
    HRestart { schedule: Schedule, eps0: f64, gamma: f64 },
    Criterion { f_star: f64, gamma: f64 },
    Grid,
}

/// Conditioning of the problem when regularity is declared.
fn conditioning(problem: &ProblemInstance) -> Result<Option<DerivedConditioning>> {
    problem
        .regularity
        .as_ref()
        .map(|r| r.conditioning())
        .transpose()
        .map_err(BenchError::from)
}

fn smooth(cond: Option<DerivedConditioning>) -> Option<DerivedConditioning> {
    cond.filter(|c| c.s == 2.0)
}

fn user_schedule(config: &ExperimentConfig) -> Result<Option<Schedule>> {
    config
        .params
        .constant
        .map(|c| Schedule::geometric(c, config.params.alpha.unwrap_or(0.0)))
        .transpose()
        .map_err(BenchError::from)
}

/// Resolves a method's parameters; fails before any computation when a
/// required parameter is neither given nor derivable from the problem.
pub fn plan(problem: &ProblemInstance, method: MethodKind, config: &ExperimentConfig) -> Result<Plan> {
    let cond = conditioning(problem)?;
    let gap0 = problem.initial_gap().filter(|g| *g > 0.0);
    let missing = |what: &str| BenchError::Config(format!("method {method} needs {what}"));
    let (step, envelope) = match method {
        MethodKind::Grad => (
            Step::Grad,
            smooth(cond)
                .zip(gap0)
                .map(|(cond, gap0)| BoundEnvelope::GradientDescent { cond, gap0 }),
        ),
        MethodKind::Acc => {
            let envelope = smooth(cond)
                .and(problem.regularity)
                .zip(problem.initial_distance())
                .map(|(reg, d)| BoundEnvelope::Accelerated {
                    c: ACCELERATED_CONSTANT,
                    lipschitz: reg.l,
                    distance: d,
                });
            (Step::Acc, envelope)
        }
        MethodKind::Mono => (Step::Mono, None),
        MethodKind::Restart => match user_schedule(config)? {
            Some(schedule) => {
                let envelope = smooth(cond).zip(gap0).map(|(cond, gap0)| BoundEnvelope::Generic {
                    cond,
                    gap0,
                    c: ACCELERATED_CONSTANT,
                    constant: schedule.constant,
                    alpha: schedule.alpha,
                });
                (Step::Restart(schedule), envelope)
            }
            None => {
                let cond = smooth(cond).ok_or_else(|| missing("--C or declared regularity with s = 2"))?;
                let gap0 = gap0.ok_or_else(|| missing("--C or a known f* (for f(x0) − f*)"))?;
                let schedule = optimal_schedule_smooth(&cond, gap0, ACCELERATED_CONSTANT)?;
                (
                    Step::Restart(schedule),
                    Some(BoundEnvelope::Smooth {
                        cond,
                        gap0,
                        c: ACCELERATED_CONSTANT,
                    }),
                )
            }
        },
        MethodKind::HRestart => {
            let eps0 = config
                .params
                .eps0
                .or(gap0)
                .ok_or_else(|| missing("--eps0 or a known f*"))?;
            match user_schedule(config)? {
                Some(schedule) => {
                    let gamma = config
                        .params
                        .gamma
                        .unwrap_or_else(|| default_criterion_gamma(problem.regularity.as_ref()));
                    (Step::HRestart { schedule, eps0, gamma }, None)
                }
                None => {
                    let cond = cond.ok_or_else(|| missing("--C or declared regularity"))?;
                    let c = universal_constant(cond.s);
                    let (schedule, q) = optimal_schedule_holder(&cond, eps0, c)?;
                    let gamma = config.params.gamma.unwrap_or(q);
                    let envelope = (gamma == q).then_some(BoundEnvelope::Holder { cond, eps0, c });
                    (Step::HRestart { schedule, eps0, gamma }, envelope)
                }
            }
        }
        MethodKind::Criterion => {
            let f_star = problem
                .f_star
                .ok_or_else(|| missing("--f-star or a problem with known f*"))?;
            let gamma = config
                .params
                .gamma
                .unwrap_or_else(|| default_criterion_gamma(problem.regularity.as_ref()));
            let envelope = cond.zip(gap0).and_then(|(cond, gap0)| {
                (gamma == cond.q).then_some(BoundEnvelope::Holder {
                    cond,
                    eps0: gap0,
                    c: universal_constant(cond.s),
                })
            });
            (Step::Criterion { f_star, gamma }, envelope)
        }
        MethodKind::Grid => {
            if config.budget < 4 {
                return Err(missing("--N ≥ 4"));
            }
            let envelope = smooth(cond).zip(gap0).map(|(cond, gap0)| BoundEnvelope::Adaptive {
                cond,
                gap0,
                c: ACCELERATED_CONSTANT,
            });
            (Step::Grid, envelope)
        }
    };
    Ok(Plan { method, step, envelope })
}

/// Outcome of one method.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: MethodKind,
    pub trace: Trace,
    /// Full grid outcome when the method is the grid search.
    pub grid: Option<GridOutcome>,
    pub envelope: Option<BoundEnvelope>,
}

impl MethodRun {
    pub fn final_gap(&self) -> Option<f64> {
        self.trace.final_gap()
    }

    /// Envelope evaluated at the iterations actually run.
    pub fn envelope_value(&self) -> Option<f64> {
        self.envelope.map(|e| e.evaluate(self.trace.iterations() as f64))
    }
}

/// Runs a planned method on the problem's default starting point.
pub fn execute(problem: &ProblemInstance, plan: &Plan, budget: usize, l0: f64) -> Result<MethodRun> {
    let oracle = problem.oracle.as_ref();
    let x0 = &problem.initial_point;
    let mut grid = None;
    let trace = match &plan.step {
        Step::Grad => gradient_descent(oracle, x0, l0, budget)?,
        Step::Acc => accelerated(oracle, x0, l0, budget)?,
        Step::Mono => monotone_restart(oracle, x0, budget, l0)?,
        Step::Restart(schedule) => restart_scheduled(oracle, x0, schedule, budget, l0)?,
        Step::HRestart { schedule, eps0, gamma } => h_restart(oracle, x0, *eps0, *gamma, schedule, budget, l0)?,
        Step::Criterion { f_star, gamma } => criterion_restart(oracle, x0, *f_star, *gamma, budget, l0)?,
        Step::Grid => {
            let mut outcome = adaptive_grid(oracle, x0, budget, l0)?;
            if let Some(f_star) = problem.f_star {
                for trace in outcome.runs.values_mut() {
                    *trace = std::mem::replace(trace, Trace::clone(trace)).with_optimum(f_star);
                }
            }
            let best = outcome.best_trace().clone();
            grid = Some(outcome);
            best
        }
    };
    let trace = match problem.f_star {
        Some(f_star) => trace.with_optimum(f_star),
        None => trace,
    };
    Ok(MethodRun {
        method: plan.method,
        trace,
        grid,
        envelope: plan.envelope,
    })
}

fn metadata(
    config: &ExperimentConfig,
    problem: &ProblemInstance,
    run: &MethodRun,
    trace: &Trace,
) -> Map<String, Value> {
    let mut meta = Map::new();
    let echo: Map<String, Value> = config
        .settings
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    meta.insert("config".into(), Value::Object(echo));
    meta.insert("problem".into(), json!(problem.name()));
    meta.insert("dimension".into(), json!(problem.dimension()));
    meta.insert("method".into(), json!(run.method.name()));
    meta.insert("budget".into(), json!(config.budget));
    meta.insert("iterations".into(), json!(trace.iterations()));
    meta.insert("final_lipschitz".into(), json_number(trace.final_lipschitz));
    meta.insert("oracle_calls".into(), json!(trace.oracle_calls));
    meta.insert("backtracks".into(), json!(trace.backtracks));
    meta.insert("restarts".into(), json!(trace.restart_count()));
    meta.insert("f_star".into(), problem.f_star.map_or(Value::Null, json_number));
    meta.insert("final_value".into(), json_number(trace.final_value()));
    meta.insert("final_gap".into(), trace.final_gap().map_or(Value::Null, json_number));
    if let Some(envelope) = run.envelope {
        meta.insert(
            "envelope".into(),
            json!({
                "kind": envelope.kind(),
                "value": json_number(envelope.evaluate(trace.iterations() as f64)),
            }),
        );
    }
    let diagnostics: Vec<Value> = trace.diagnostics.iter().map(|d| json!(format!("{d:?}"))).collect();
    meta.insert("diagnostics".into(), Value::Array(diagnostics));
    meta
}

fn render(config: &ExperimentConfig, problem: &ProblemInstance, run: &MethodRun, trace: &Trace) -> String {
    match config.format {
        OutputFormat::Csv => trace_csv(trace),
        OutputFormat::Json => trace_json(trace, metadata(config, problem, run, trace)),
    }
}

/// What `run` produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub run: MethodRun,
    pub path: PathBuf,
}

/// Runs `config.method` and writes its trace.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    let problem = build_problem(config)?;
    let plan = plan(&problem, config.method, config)?;
    let run = execute(&problem, &plan, config.budget, config.l0)?;
    let path = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("trace.{}", config.format.extension())));
    write_atomic(&path, &render(config, &problem, &run, &run.trace))?;
    Ok(RunReport { run, path })
}

/// One row of a comparison summary.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub method: MethodKind,
    pub outcome: std::result::Result<MethodRun, String>,
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub summary_path: PathBuf,
    pub directory: PathBuf,
}

impl CompareReport {
    pub fn run(&self, method: MethodKind) -> Option<&MethodRun> {
        self.rows
            .iter()
            .find(|r| r.method == method)
            .and_then(|r| r.outcome.as_ref().ok())
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

fn opt(value: Option<f64>) -> String {
    value.map(format_number).unwrap_or_default()
}

/// Runs every method of `config.methods` at the same budget, concurrently,
/// and writes per-method traces plus `summary.csv` into the output directory.
///
/// Parameter problems abort before anything runs. Failures during a run are
/// recorded in the summary; the report is returned either way and the caller
/// decides the exit status from [`CompareReport::failures`].
pub fn compare(config: &ExperimentConfig) -> Result<CompareReport> {
    let problem = build_problem(config)?;
    let plans = config
        .methods
        .iter()
        .map(|&m| plan(&problem, m, config))
        .collect::<Result<Vec<_>>>()?;
    let directory = config.out.clone().unwrap_or_else(|| PathBuf::from("compare"));
    let rows: Vec<CompareRow> = plans
        .par_iter()
        .map(|plan| CompareRow {
            method: plan.method,
            outcome: execute(&problem, plan, config.budget, config.l0).map_err(|e| e.to_string()),
        })
        .collect();

    let ext = config.format.extension();
    let mut summary = Vec::new();
    for row in &rows {
        match &row.outcome {
            Ok(run) => {
                let path = directory.join(format!("{}.{ext}", run.method.name()));
                write_atomic(&path, &render(config, &problem, run, &run.trace))?;
                let detail = run
                    .grid
                    .as_ref()
                    .map(|g| format!("best=S({},{})", g.best.0, g.best.1))
                    .unwrap_or_default();
                summary.push(vec![
                    run.method.name().to_string(),
                    "ok".into(),
                    format_number(run.trace.final_value()),
                    opt(run.final_gap()),
                    run.trace.restart_count().to_string(),
                    run.trace.iterations().to_string(),
                    run.trace.oracle_calls.to_string(),
                    run.trace.backtracks.to_string(),
                    opt(run.envelope_value()),
                    detail,
                ]);
            }
            Err(message) => {
                let mut line = vec![row.method.name().to_string(), "failed".into()];
                line.extend(std::iter::repeat_n(String::new(), 7));
                line.push(message.clone());
                summary.push(line);
            }
        }
    }
    let summary_path = directory.join("summary.csv");
    write_atomic(
        &summary_path,
        &csv_text(
            &[
                "method",
                "status",
                "final_f",
                "final_gap",
                "restarts",
                "iterations",
                "oracle_calls",
                "backtracks",
                "envelope",
                "detail",
            ],
            &summary,
        ),
    )?;
    Ok(CompareReport {
        rows,
        summary_path,
        directory,
    })
}

#[derive(Debug, Clone)]
pub struct GridReport {
    pub run: MethodRun,
    pub directory: PathBuf,
    pub summary_path: PathBuf,
    /// One trace file per scheme, skipped schemes included, in row-major order.
    pub trace_paths: Vec<PathBuf>,
}

impl GridReport {
    pub fn outcome(&self) -> &GridOutcome {
        self.run.grid.as_ref().expect("grid runs carry their outcome")
    }
}

fn scheme_path(directory: &Path, i: u32, j: u32, ext: &str) -> PathBuf {
    directory.join(format!("S_i{i}_j{j}.{ext}"))
}

/// Runs the logarithmic grid search and writes one trace per scheme
/// (header-only for skipped schemes) and a summary naming the best scheme.
pub fn grid(config: &ExperimentConfig) -> Result<GridReport> {
    let problem = build_problem(config)?;
    let plan = plan(&problem, MethodKind::Grid, config)?;
    let run = execute(&problem, &plan, config.budget, config.l0)?;
    let outcome = run.grid.as_ref().expect("grid plan");
    let directory = config.out.clone().unwrap_or_else(|| PathBuf::from("grid"));
    let ext = config.format.extension();

    let mut cells: Vec<(u32, u32)> = outcome
        .runs
        .keys()
        .copied()
        .chain(outcome.skipped.iter().copied())
        .collect();
    cells.sort_unstable();
    let mut trace_paths = Vec::with_capacity(cells.len());
    let mut summary = Vec::with_capacity(cells.len());
    let empty = Trace::clone(&run.trace);
    for &(i, j) in &cells {
        let path = scheme_path(&directory, i, j, ext);
        match outcome.runs.get(&(i, j)) {
            Some(trace) => {
                let scheme_run = MethodRun {
                    method: MethodKind::Grid,
                    trace: trace.clone(),
                    grid: None,
                    envelope: None,
                };
                write_atomic(&path, &render(config, &problem, &scheme_run, trace))?;
                summary.push(vec![
                    i.to_string(),
                    j.to_string(),
                    "ok".into(),
                    trace.iterations().to_string(),
                    format_number(trace.final_value()),
                    opt(trace.final_gap()),
                    trace.restart_count().to_string(),
                    trace.oracle_calls.to_string(),
                    u8::from(outcome.best == (i, j)).to_string(),
                ]);
            }
            None => {
                let mut skipped = empty.clone();
                skipped.entries.clear();
                let scheme_run = MethodRun {
                    method: MethodKind::Grid,
                    trace: skipped.clone(),
                    grid: None,
                    envelope: None,
                };
                write_atomic(&path, &render(config, &problem, &scheme_run, &skipped))?;
                summary.push(vec![
                    i.to_string(),
                    j.to_string(),
                    "skipped".into(),
                    "0".into(),
                    String::new(),
                    String::new(),
                    "0".into(),
                    "0".into(),
                    "0".into(),
                ]);
            }
        }
        trace_paths.push(path);
    }
    let summary_path = directory.join("summary.csv");
    let mut text = csv_text(
        &[
            "i",
            "j",
            "status",
            "iterations",
            "final_f",
            "final_gap",
            "restarts",
            "oracle_calls",
            "best",
        ],
        &summary,
    );
    text.push_str(&format!("# best scheme: S({},{})\n", outcome.best.0, outcome.best.1));
    write_atomic(&summary_path, &text)?;
    Ok(GridReport {
        run,
        directory,
        summary_path,
        trace_paths,
    })
}

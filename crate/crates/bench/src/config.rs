//! Experiment configuration from `key=value` files and command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use restart_core::problems::DataFormat;

use crate::error::{BenchError, Result};

/// Raw settings as `key → value`, in the spelling of the long flags
/// (`N`, `L0`, `f-star`, …).
pub type Settings = BTreeMap<String, String>;

const KNOWN_KEYS: &[&str] = &[
    "problem",
    "dataset",
    "dataset-format",
    "loss",
    "method",
    "methods",
    "N",
    "L0",
    "seed",
    "gamma",
    "C",
    "alpha",
    "eps0",
    "f-star",
    "out",
    "format",
    "dim",
    "kappa",
    "power",
    "radius",
    "lambda",
    "rows",
    "cols",
    "conditioning",
    "reference-iterations",
];

/// Reads a plain `key=value` file. Blank lines and `#` comments are ignored.
pub fn read_settings_file(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    let mut settings = Settings::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            BenchError::Config(format!("{}: line {}: expected key=value", path.display(), number + 1))
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        settings.insert(key, value.trim().to_string());
    }
    Ok(settings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MethodKind {
    Grad,
    Acc,
    Mono,
    Restart,
    HRestart,
    Criterion,
    Grid,
}

impl MethodKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Grad => "grad",
            Self::Acc => "acc",
            Self::Mono => "mono",
            Self::Restart => "restart",
            Self::HRestart => "h-restart",
            Self::Criterion => "criterion",
            Self::Grid => "grid",
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "grad" => Self::Grad,
            "acc" => Self::Acc,
            "mono" => Self::Mono,
            "restart" => Self::Restart,
            "h-restart" => Self::HRestart,
            "criterion" => Self::Criterion,
            "grid" => Self::Grid,
            other => {
                return Err(BenchError::Config(format!(
                    "unknown method `{other}` (expected grad, acc, mono, restart, h-restart, criterion or grid)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loss {
    LeastSquares,
    Logistic,
    Lasso,
    DualSvm,
}

impl FromStr for Loss {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "least-squares" | "ls" => Self::LeastSquares,
            "logistic" => Self::Logistic,
            "lasso" => Self::Lasso,
            "dual-svm" | "svm" => Self::DualSvm,
            other => {
                return Err(BenchError::Config(format!(
                    "unknown loss `{other}` (expected least-squares, logistic, lasso or dual-svm)"
                )))
            }
        })
    }
}

/// Where the data of a dataset-backed problem comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File {
        path: PathBuf,
        format: DataFormat,
    },
    Synthetic {
        rows: usize,
        cols: usize,
        conditioning: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemConfig {
    Quadratic {
        dim: usize,
        kappa: f64,
    },
    NormPower {
        dim: usize,
        power: f64,
        radius: f64,
    },
    Norm {
        dim: usize,
    },
    Data {
        source: DataSource,
        loss: Loss,
        /// Weight of the ℓ1 penalty or of the SVM regularizer.
        lambda: f64,
        /// Iterations of the reference solve used when `f*` is unknown; 0 disables it.
        reference_iterations: usize,
    },
}

/// Parameters shared by the restart schemes; unset values fall back to the
/// problem's declared regularity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MethodParams {
    pub gamma: Option<f64>,
    pub constant: Option<f64>,
    pub alpha: Option<f64>,
    pub eps0: Option<f64>,
    pub f_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub method: MethodKind,
    /// Methods of a comparison.
    pub methods: Vec<MethodKind>,
    pub params: MethodParams,
    pub budget: usize,
    pub l0: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Settings the configuration was built from, echoed into JSON output.
    pub settings: Settings,
}

fn parse<T: FromStr>(settings: &Settings, key: &str) -> Result<Option<T>> {
    settings
        .get(key)
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| BenchError::Config(format!("cannot parse --{key} value `{v}`")))
        })
        .transpose()
}

fn positive(settings: &Settings, key: &str) -> Result<Option<f64>> {
    match parse::<f64>(settings, key)? {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(BenchError::Config(format!("--{key} must be positive, got {v}"))),
        other => Ok(other),
    }
}

fn finite(settings: &Settings, key: &str) -> Result<Option<f64>> {
    match parse::<f64>(settings, key)? {
        Some(v) if !v.is_finite() => Err(BenchError::Config(format!("--{key} must be finite, got {v}"))),
        other => Ok(other),
    }
}

impl ExperimentConfig {
    /// Builds and validates a configuration. Every method-specific parameter
    /// is checked here, before any computation starts.
    pub fn from_settings(settings: Settings) -> Result<Self> {
        if let Some(key) = settings.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(BenchError::Config(format!("unknown setting `{key}`")));
        }
        let seed = parse::<u64>(&settings, "seed")?.unwrap_or(0);
        let problem = Self::problem(&settings)?;
        let method = parse::<MethodKind>(&settings, "method")?.unwrap_or(MethodKind::Acc);
        let methods = match settings.get("methods") {
            Some(list) => list
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<MethodKind>>>()?,
            None => vec![MethodKind::Grad, MethodKind::Acc, MethodKind::Mono, MethodKind::Grid],
        };
        if methods.is_empty() {
            return Err(BenchError::Config("--methods lists no method".into()));
        }
        let budget = parse::<usize>(&settings, "N")?.unwrap_or(1000);
        if budget == 0 {
            return Err(BenchError::Config("--N must be at least 1".into()));
        }
        let l0 = positive(&settings, "L0")?.unwrap_or(1.0);
        let gamma = finite(&settings, "gamma")?;
        if gamma.is_some_and(|g| g < 0.0) {
            return Err(BenchError::Config("--gamma must be nonnegative".into()));
        }
        let alpha = finite(&settings, "alpha")?;
        if alpha.is_some_and(|a| a < 0.0) {
            return Err(BenchError::Config("--alpha must be nonnegative".into()));
        }
        let constant = positive(&settings, "C")?;
        if alpha.is_some() && constant.is_none() {
            return Err(BenchError::Config("--alpha requires --C".into()));
        }
        let params = MethodParams {
            gamma,
            constant,
            alpha,
            eps0: positive(&settings, "eps0")?,
            f_star: finite(&settings, "f-star")?,
        };
        let format = match settings.get("format").map(|s| s.trim()) {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(BenchError::Config(format!(
                    "unknown format `{other}` (expected csv or json)"
                )))
            }
        };
        let config = Self {
            problem,
            method,
            methods,
            params,
            budget,
            l0,
            seed,
            out: settings.get("out").map(PathBuf::from),
            format,
            settings,
        };
        for &m in std::iter::once(&config.method).chain(&config.methods) {
            config.check_method(m)?;
        }
        Ok(config)
    }

    /// Method-specific checks that do not need the problem instance.
    fn check_method(&self, method: MethodKind) -> Result<()> {
        match method {
            MethodKind::Grid if self.budget < 4 => Err(BenchError::Config(format!(
                "grid search needs --N ≥ 4, got {}",
                self.budget
            ))),
            _ => Ok(()),
        }
    }

    fn problem(settings: &Settings) -> Result<ProblemConfig> {
        let name = settings
            .get("problem")
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| {
                if settings.contains_key("dataset") {
                    "dataset".into()
                } else {
                    "quadratic".into()
                }
            });
        let dim = parse::<usize>(settings, "dim")?;
        if dim == Some(0) {
            return Err(BenchError::Config("--dim must be at least 1".into()));
        }
        Ok(match name.as_str() {
            "quadratic" => {
                let kappa = parse::<f64>(settings, "kappa")?.unwrap_or(100.0);
                if !(kappa >= 1.0 && kappa.is_finite()) {
                    return Err(BenchError::Config(format!("--kappa must be ≥ 1, got {kappa}")));
                }
                ProblemConfig::Quadratic {
                    dim: dim.unwrap_or(50),
                    kappa,
                }
            }
            "norm-power" => {
                let power = parse::<f64>(settings, "power")?.unwrap_or(4.0);
                if !(power >= 2.0 && power.is_finite()) {
                    return Err(BenchError::Config(format!("--power must be ≥ 2, got {power}")));
                }
                ProblemConfig::NormPower {
                    dim: dim.unwrap_or(10),
                    power,
                    radius: positive(settings, "radius")?.unwrap_or(1.0),
                }
            }
            "norm" => ProblemConfig::Norm { dim: dim.unwrap_or(1) },
            "dataset" | "synthetic" => {
                let source = if name == "dataset" {
                    let path = settings
                        .get("dataset")
                        .ok_or_else(|| BenchError::Config("--problem dataset requires --dataset".into()))?;
                    let path = PathBuf::from(path);
                    let format = match settings.get("dataset-format") {
                        Some(f) => f.parse::<DataFormat>()?,
                        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => DataFormat::Csv,
                        None => DataFormat::LibSvm,
                    };
                    DataSource::File { path, format }
                } else {
                    let conditioning = parse::<f64>(settings, "conditioning")?.unwrap_or(10.0);
                    if !(conditioning >= 1.0 && conditioning.is_finite()) {
                        return Err(BenchError::Config(format!(
                            "--conditioning must be ≥ 1, got {conditioning}"
                        )));
                    }
                    let rows = parse::<usize>(settings, "rows")?.unwrap_or(208);
                    let cols = parse::<usize>(settings, "cols")?.unwrap_or(60);
                    if rows == 0 || cols == 0 {
                        return Err(BenchError::Config("--rows and --cols must be positive".into()));
                    }
                    DataSource::Synthetic {
                        rows,
                        cols,
                        conditioning,
                    }
                };
                ProblemConfig::Data {
                    source,
                    loss: parse::<Loss>(settings, "loss")?.unwrap_or(Loss::LeastSquares),
                    lambda: positive(settings, "lambda")?.unwrap_or(1.0),
                    reference_iterations: parse::<usize>(settings, "reference-iterations")?.unwrap_or(0),
                }
            }
            other => {
                return Err(BenchError::Config(format!(
                    "unknown problem `{other}` (expected quadratic, norm-power, norm, dataset or synthetic)"
                )))
            }
        })
    }
}

//! Experiment configuration files.
//!
//! ```json
//! {"experiment": "carleson", "seed": 7, "output_dir": "out",
//!  "params": {"alpha": 1.0, "r": 1.0}, "inputs": {"measure": "lattice.json"}}
//! ```
//!
//! Input paths and a relative `output_dir` are resolved against the
//! directory of the config file.

use std::path::{Path, PathBuf};

use qfock::bank::FunctionSpec;
use qfock::measure::DiscreteMeasure;
use qfock::SliceFunction;
use serde::Deserialize;
use serde_json::Value;

use crate::catalog::{self, ExperimentInfo};
use crate::error::{CliError, CliResult};

/// Environment variable that overrides the output directory.
pub const OUTPUT_ENV: &str = "QFOCK_OUTPUT_DIR";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
    #[serde(default)]
    inputs: serde_json::Map<String, Value>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub r: Option<f64>,
    pub n: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    pub samples: Option<usize>,
    pub xs: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub spacing: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub angles: Option<usize>,
    pub window: Option<f64>,
    pub grid_n: Option<usize>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputPaths {
    symbol: Option<PathBuf>,
    measure: Option<PathBuf>,
}

/// A symbol read from an input file.
#[derive(Clone, Debug)]
pub struct SymbolInput {
    pub spec: FunctionSpec,
    pub label: String,
}

/// A validated configuration with its inputs loaded.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub info: &'static ExperimentInfo,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub params: Params,
    pub symbol: Option<SymbolInput>,
    pub measure: Option<(DiscreteMeasure, String)>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Input { path: path.to_path_buf(), source })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let env = std::env::var_os(OUTPUT_ENV).map(PathBuf::from);
        Self::parse(&text, &base, env)
    }

    /// Parses `text`; relative paths are taken from `base`, and `output_override`
    /// replaces the configured output directory.
    pub fn parse(text: &str, base: &Path, output_override: Option<PathBuf>) -> CliResult<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let info = catalog::find(&raw.experiment).ok_or_else(|| CliError::Config(catalog::unknown_message(&raw.experiment)))?;
        for key in raw.params.keys() {
            if !info.params.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "parameter `{key}` is not used by `{}` (accepted: {})",
                    info.name,
                    list_or_none(info.params)
                )));
            }
        }
        for key in raw.inputs.keys() {
            if !info.inputs.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "input `{key}` is not used by `{}` (accepted: {})",
                    info.name,
                    list_or_none(info.inputs)
                )));
            }
        }
        let params: Params =
            serde_json::from_value(Value::Object(raw.params)).map_err(|e| CliError::Config(format!("params: {e}")))?;
        validate(&params)?;
        let inputs: InputPaths =
            serde_json::from_value(Value::Object(raw.inputs)).map_err(|e| CliError::Config(format!("inputs: {e}")))?;
        if inputs.symbol.is_some() && inputs.measure.is_some() {
            return Err(CliError::Config("give either a symbol or a measure, not both".into()));
        }
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        let symbol = match &inputs.symbol {
            Some(p) => {
                let path = resolve(p);
                let text = read(&path)?;
                let spec = FunctionSpec::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                Some(SymbolInput { spec, label: p.display().to_string() })
            }
            None => None,
        };
        let measure = match &inputs.measure {
            Some(p) => {
                let path = resolve(p);
                let mu = DiscreteMeasure::from_json(&read(&path)?)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                Some((mu, p.display().to_string()))
            }
            None => None,
        };
        let output_dir = match output_override {
            Some(dir) => dir,
            None => resolve(raw.output_dir.as_deref().unwrap_or(Path::new("qfock-out"))),
        };
        Ok(ExperimentConfig { info, seed: raw.seed, output_dir, params, symbol, measure })
    }

    /// The configured symbol, or the builtin `default`.
    pub fn symbol_or(&self, default: &str, alpha: f64) -> CliResult<(SliceFunction, String)> {
        match &self.symbol {
            Some(s) => Ok((s.spec.build(alpha).map_err(|e| CliError::Config(e.to_string()))?, s.label.clone())),
            None => Ok((qfock::bank::builtin(default, alpha)?, format!("builtin {default}"))),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn list_or_none(items: &[&str]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

fn validate(p: &Params) -> CliResult<()> {
    let positive = [("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma), ("r", p.r), ("radius", p.radius), ("spacing", p.spacing), ("window", p.window), ("tolerance", p.tolerance)];
    for (name, v) in positive {
        if let Some(v) = v {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::Config(format!("`{name}` must be positive and finite, got {v}")));
            }
        }
    }
    if let Some(v) = p.p {
        if !(v >= 1.0) || !v.is_finite() {
            return Err(CliError::Config(format!("`p` must lie in [1, ∞), got {v}")));
        }
    }
    let counts = [("n", p.n), ("samples", p.samples), ("angles", p.angles), ("grid_n", p.grid_n)];
    for (name, v) in counts {
        if v == Some(0) {
            return Err(CliError::Config(format!("`{name}` must be at least 1")));
        }
    }
    if let Some(s) = &p.sizes {
        if s.is_empty() || s.contains(&0) {
            return Err(CliError::Config("`sizes` must be a nonempty list of positive sizes".into()));
        }
    }
    if let Some(r) = &p.radii {
        if r.is_empty() || r.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(CliError::Config("`radii` must be a nonempty list of nonnegative radii".into()));
        }
    }
    if let Some(xs) = &p.xs {
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config("`xs` must be finite".into()));
        }
    }
    Ok(())
}

//! Experiment configuration files.
//!
//! Configs are TOML. Top-level keys and sections describe a single
//! [`SimConfig`]; an optional `[experiment]` section selects what to run.
//!
//! ```toml
//! seed = 3
//! replicas = 5
//! horizon = 10000
//!
//! [network]
//! kind = "lattice"          # or "watts_strogatz" with n, k, p
//! side = 50
//!
//! [rates]
//! lambda = [0.03, 0.03]     # G0->G1, G1->G2
//! mu = [0.05, 0.02]         # G1->G0, G2->G1
//!
//! [experiment]
//! kind = "mu_curves"
//!
//! [[experiment.axes]]
//! param = "mu2"
//! values = [0.02, 0.04]
//!
//! [[experiment.axes]]
//! param = "mu1"
//! min = 0.005
//! max = 0.05
//! step = 0.005
//! ```
//!
//! Every key not listed in the README is rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{NetworkSpec, ScheduleKind, SimConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Timeseries,
    Dist,
    MuCurves,
    LambdaHeatmap,
    PayoffHeatmap,
    ScheduleCompare,
    ScaleSweep,
}

impl ExperimentKind {
    pub fn is_sweep(self) -> bool {
        matches!(
            self,
            ExperimentKind::MuCurves
                | ExperimentKind::LambdaHeatmap
                | ExperimentKind::PayoffHeatmap
                | ExperimentKind::ScaleSweep
        )
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExperimentKind::Timeseries => "timeseries",
            ExperimentKind::Dist => "dist",
            ExperimentKind::MuCurves => "mu_curves",
            ExperimentKind::LambdaHeatmap => "lambda_heatmap",
            ExperimentKind::PayoffHeatmap => "payoff_heatmap",
            ExperimentKind::ScheduleCompare => "schedule_compare",
            ExperimentKind::ScaleSweep => "scale_sweep",
        };
        f.write_str(s)
    }
}

/// One sweep dimension: either explicit `values` or `min..=max` by `step`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

impl Axis {
    pub fn list(param: &str, values: &[f64]) -> Self {
        Axis {
            param: param.into(),
            values: Some(values.to_vec()),
            min: None,
            max: None,
            step: None,
        }
    }

    pub fn range(param: &str, min: f64, max: f64, step: f64) -> Self {
        Axis {
            param: param.into(),
            values: None,
            min: Some(min),
            max: Some(max),
            step: Some(step),
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let key = format!("experiment.axes.{}", self.param);
        match (&self.values, self.min, self.max, self.step) {
            (Some(v), None, None, None) => {
                if v.is_empty() {
                    Err(Error::validation(key, "empty value list"))
                } else {
                    Ok(v.clone())
                }
            }
            (None, Some(min), Some(max), Some(step)) => {
                if !(min.is_finite() && max.is_finite() && step > 0.0 && max >= min) {
                    return Err(Error::validation(key, "need finite min <= max and step > 0"));
                }
                let n = ((max - min) / step + 1e-9).floor() as usize;
                // round to kill accumulated noise like 0.30000000000000004
                Ok((0..=n).map(|i| round12(min + i as f64 * step)).collect())
            }
            _ => Err(Error::validation(key, "give either `values` or all of `min`, `max`, `step`")),
        }
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// A labeled set of parameter overrides applied before sweeping the axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub label: String,
    #[serde(default)]
    pub set: std::collections::BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<Axis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<Case>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schedules: Vec<ScheduleKind>,
    /// Also run every point with reputation disabled (payoff heat maps).
    #[serde(default = "yes")]
    pub ablation: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn yes() -> bool {
    true
}

impl ExperimentSection {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentSection {
            kind,
            axes: Vec::new(),
            cases: Vec::new(),
            schedules: Vec::new(),
            ablation: true,
            workers: None,
        }
    }
}

/// A validated experiment with every default resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentSection,
    pub base: SimConfig,
}

impl ExperimentSpec {
    /// Fills kind-specific defaults and validates everything.
    pub fn resolve(mut experiment: ExperimentSection, base: SimConfig) -> Result<Self> {
        base.validate()?;
        if experiment.axes.is_empty() {
            experiment.axes = default_axes(experiment.kind, &base.network);
        }
        if experiment.kind == ExperimentKind::ScheduleCompare && experiment.schedules.is_empty() {
            experiment.schedules = default_schedules();
        }
        if experiment.kind.is_sweep() && experiment.axes.is_empty() {
            return Err(Error::validation("experiment.axes", format!("{} needs at least one axis", experiment.kind)));
        }
        if !experiment.kind.is_sweep() && !experiment.axes.is_empty() {
            return Err(Error::validation("experiment.axes", format!("{} takes no axes", experiment.kind)));
        }
        if experiment.workers == Some(0) {
            return Err(Error::validation("experiment.workers", "must be at least 1"));
        }
        for s in &experiment.schedules {
            s.validate().map_err(|e| Error::validation("experiment.schedules", e.to_string()))?;
        }
        for axis in &experiment.axes {
            let values = axis.values()?;
            let mut probe = base.clone();
            set_param(&mut probe, &axis.param, values[0])?;
        }
        for case in &experiment.cases {
            let mut probe = base.clone();
            for (k, &v) in &case.set {
                set_param(&mut probe, k, v)?;
            }
            probe
                .validate()
                .map_err(|e| Error::validation(format!("experiment.cases.{}", case.label), e.to_string()))?;
        }
        Ok(ExperimentSpec { experiment, base })
    }
}

fn default_axes(kind: ExperimentKind, network: &NetworkSpec) -> Vec<Axis> {
    match kind {
        ExperimentKind::MuCurves => vec![
            Axis::list("mu2", &[0.02, 0.04, 0.06]),
            Axis::range("mu1", 0.005, 0.05, 0.005),
        ],
        ExperimentKind::LambdaHeatmap => vec![
            Axis::range("lambda1", 0.005, 0.05, 0.005),
            Axis::range("lambda0", 0.005, 0.05, 0.005),
        ],
        ExperimentKind::PayoffHeatmap => vec![Axis::range("b", 1.0, 2.0, 0.1), Axis::range("r", 0.0, 1.0, 0.1)],
        ExperimentKind::ScaleSweep => match network {
            NetworkSpec::Lattice { .. } => vec![Axis::range("side", 30.0, 210.0, 30.0)],
            NetworkSpec::WattsStrogatz { .. } => vec![Axis::range("n", 1000.0, 21000.0, 4000.0)],
        },
        _ => Vec::new(),
    }
}

/// Update intervals compared by `schedule_compare` when none are given.
pub fn default_schedules() -> Vec<ScheduleKind> {
    vec![
        ScheduleKind::Fixed { interval: 0.5 },
        ScheduleKind::Fixed { interval: 1.0 },
        ScheduleKind::Fixed { interval: 5.0 },
        ScheduleKind::Exponential { mean: 1.0 },
        ScheduleKind::Powerlaw { alpha: 2.5, xmin: 0.6 },
    ]
}

fn as_count(key: &str, value: f64) -> Result<usize> {
    if value >= 0.0 && value.fract() == 0.0 && value < 1e12 {
        Ok(value as usize)
    } else {
        Err(Error::validation(key, format!("must be a nonnegative integer, got {value}")))
    }
}

fn rate_index(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok()
}

/// Sets a sweepable parameter by name.
///
/// Names: `b`, `r`, `kappa`, `delta`, `rep_mean`, `rep_sigma`,
/// `coop_probability`, `horizon`, `reputation` (0 or 1), `lambda<i>`
/// (`Gi -> Gi+1`), `mu<i>` (`Gi -> Gi-1`, from 1), `side` (lattice), `n`,
/// `k`, `p` (Watts–Strogatz).
pub fn set_param(config: &mut SimConfig, name: &str, value: f64) -> Result<()> {
    let key = || format!("experiment.{name}");
    match name {
        "b" => config.payoff.b = value,
        "r" => config.payoff.r = value,
        "kappa" => config.kappa = value,
        "delta" => config.reputation.delta = value,
        "rep_mean" => config.reputation.init_mean = value,
        "rep_sigma" => config.reputation.init_sigma = value,
        "coop_probability" => config.coop_probability = value,
        "horizon" => config.horizon = value,
        "reputation" => {
            config.reputation.enabled = if value == 0.0 {
                false
            } else if value == 1.0 {
                true
            } else {
                return Err(Error::validation(key(), "reputation takes 0 or 1"));
            }
        }
        "side" => match &mut config.network {
            NetworkSpec::Lattice { side } => *side = as_count(name, value)?,
            _ => return Err(Error::validation(name, "`side` applies to lattice networks")),
        },
        "n" | "k" | "p" => match &mut config.network {
            NetworkSpec::WattsStrogatz { n, k, p, .. } => match name {
                "n" => *n = as_count(name, value)?,
                "k" => *k = as_count(name, value)?,
                _ => *p = value,
            },
            _ => return Err(Error::validation(name, format!("`{name}` applies to watts_strogatz networks"))),
        },
        _ => {
            if let Some(i) = rate_index(name, "lambda") {
                let slot = config
                    .rates
                    .lambda
                    .get_mut(i)
                    .ok_or_else(|| Error::validation(name, "no such transition"))?;
                *slot = value;
            } else if let Some(i) = rate_index(name, "mu").filter(|&i| i >= 1) {
                let slot = config
                    .rates
                    .mu
                    .get_mut(i - 1)
                    .ok_or_else(|| Error::validation(name, "no such transition"))?;
                *slot = value;
            } else {
                return Err(Error::validation(name, "unknown parameter"));
            }
        }
    }
    Ok(())
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Name inside the first pair of backticks of a serde message.
fn quoted_key(message: &str) -> Option<&str> {
    let start = message.find('`')? + 1;
    let len = message[start..].find('`')?;
    Some(&message[start..start + len])
}

/// Dotted path of the first table entry named `key`, depth first.
fn locate(value: &toml::Value, key: &str) -> Option<String> {
    let children: Vec<(String, &toml::Value)> = match value {
        toml::Value::Table(t) => {
            if t.contains_key(key) {
                return Some(key.to_string());
            }
            t.iter().map(|(k, v)| (k.clone(), v)).collect()
        }
        toml::Value::Array(items) => items.iter().enumerate().map(|(i, v)| (i.to_string(), v)).collect(),
        _ => return None,
    };
    children
        .into_iter()
        .find_map(|(name, child)| locate(child, key).map(|rest| format!("{name}.{rest}")))
}

fn schema_error(text: &str, path: &Path, section: &str, value: &toml::Value, err: toml::de::Error) -> Error {
    let message = err.message().trim().to_string();
    match quoted_key(&message) {
        Some(key) if message.starts_with("unknown field") || message.starts_with("missing field") => {
            let key = match locate(value, key) {
                Some(found) if message.starts_with("unknown field") => found,
                _ => key.to_string(),
            };
            let key = if section.is_empty() { key } else { format!("{section}.{key}") };
            Error::Validation { key, message }
        }
        _ => match err.span() {
            Some(span) => Error::Parse {
                path: path.to_path_buf(),
                line: line_of(text, span.start),
                message,
            },
            None => Error::Validation {
                key: if section.is_empty() { "(config)".into() } else { section.into() },
                message,
            },
        },
    }
}

/// Parses and validates a config held in memory; `path` only labels errors.
pub fn parse_config_str(text: &str, path: &Path) -> Result<ExperimentSpec> {
    let mut table: toml::Table = toml::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().trim().to_string(),
    })?;
    let experiment = match table.remove("experiment") {
        Some(value) => ExperimentSection::deserialize(value.clone())
            .map_err(|e| schema_error(text, path, "experiment", &value, e))?,
        None => ExperimentSection::new(ExperimentKind::Timeseries),
    };
    let base = toml::Value::Table(table);
    let base = SimConfig::deserialize(base.clone()).map_err(|e| schema_error(text, path, "", &base, e))?;
    ExperimentSpec::resolve(experiment, base)
}

pub fn parse_config(path: &Path) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text, path)
}

/// Serializes a resolved spec back to config syntax.
pub fn to_toml(spec: &ExperimentSpec) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        #[serde(flatten)]
        base: &'a SimConfig,
        experiment: &'a ExperimentSection,
    }
    toml::to_string(&Out {
        base: &spec.base,
        experiment: &spec.experiment,
    })
    .expect("config types serialize to TOML")
}

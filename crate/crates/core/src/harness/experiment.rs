//! Replicated runs, parameter sweeps and the CSV artifacts they produce.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{set_param, to_toml, Axis, Case, ExperimentKind, ExperimentSpec};
use crate::engine::{self, cooperation_frequency, mean_state_counts, relative_error, RunMetrics, ScheduleKind, SimConfig};
use crate::error::{Error, Result};
use crate::gamespace::expected_counts;

/// Environment variable that caps the number of worker threads.
pub const WORKERS_ENV: &str = "EVOGAME_WORKERS";

/// Mean and sample standard deviation over replicas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

pub fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary { mean: f64::NAN, std: f64::NAN, count };
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let std = if count > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Summary { mean, std, count }
}

/// Worker budget: the environment variable wins over the config value.
pub fn worker_budget(configured: Option<usize>) -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .or(configured)
}

fn with_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_budget(workers) {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

/// All replicas of one configuration, in replica order.
pub fn run_replicas(config: &SimConfig) -> Result<Vec<RunMetrics>> {
    config.validate()?;
    let graph = config.build_graph()?;
    (0..config.replicas as u64)
        .into_par_iter()
        .map(|r| engine::run_replica(config, &graph, r))
        .collect()
}

/// Final cooperation frequency of every replica, summarized.
pub fn cooperation_summary(config: &SimConfig) -> Result<Summary> {
    let fcs = run_replicas(config)?
        .iter()
        .map(|m| cooperation_frequency(m, config.metrics.tail))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(&fcs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub case: Option<String>,
    pub coords: Vec<f64>,
    pub fc_mean: f64,
    pub fc_std: f64,
    pub replicas: usize,
}

/// One row per grid point, axis columns in axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<String>,
    pub has_case: bool,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut h = Vec::new();
        if self.has_case {
            h.push("case".to_string());
        }
        h.extend(self.axes.iter().cloned());
        h.extend(["fc_mean", "fc_std", "replicas"].map(String::from));
        h
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut rec = Vec::new();
            if self.has_case {
                rec.push(row.case.clone().unwrap_or_default());
            }
            rec.extend(row.coords.iter().map(f64::to_string));
            rec.push(row.fc_mean.to_string());
            rec.push(row.fc_std.to_string());
            rec.push(row.replicas.to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.clone();
        let bad = |m: &str| Error::validation(path.display().to_string(), m.to_string());
        let cols: Vec<&str> = header.iter().collect();
        if cols.len() < 3 || cols[cols.len() - 3..] != ["fc_mean", "fc_std", "replicas"] {
            return Err(bad("not a sweep result"));
        }
        let has_case = &header[0] == "case";
        let first_axis = usize::from(has_case);
        let axes: Vec<String> = header.iter().skip(first_axis).take(header.len() - 3 - first_axis).map(String::from).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("malformed number"));
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let coords = (first_axis..first_axis + axes.len()).map(|i| num(&rec[i])).collect::<Result<Vec<_>>>()?;
            let n = rec.len();
            rows.push(SweepRow {
                case: has_case.then(|| rec[0].to_string()),
                coords,
                fc_mean: num(&rec[n - 3])?,
                fc_std: num(&rec[n - 2])?,
                replicas: rec[n - 1].parse().map_err(|_| bad("malformed replica count"))?,
            });
        }
        Ok(SweepResult { axes, has_case, rows })
    }

    /// Rows of one case, in grid order.
    pub fn case_rows<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.case.as_deref() == Some(label))
    }
}

fn describe(case: Option<&Case>, axes: &[Axis], coords: &[f64]) -> String {
    let mut parts: Vec<String> = case.map(|c| format!("case={}", c.label)).into_iter().collect();
    parts.extend(axes.iter().zip(coords).map(|(a, v)| format!("{}={v}", a.param)));
    parts.join(", ")
}

/// Full cartesian grid over `axes` (first axis outermost), repeated for every
/// case. Every grid point reuses the same replica seeds.
pub fn sweep(base: &SimConfig, axes: &[Axis], cases: &[Case], workers: Option<usize>) -> Result<SweepResult> {
    let values: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect::<Result<_>>()?;
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for vals in &values {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    let case_list: Vec<Option<&Case>> = if cases.is_empty() { vec![None] } else { cases.iter().map(Some).collect() };

    let mut points = Vec::new();
    for &case in &case_list {
        for coords in &grid {
            let mut config = base.clone();
            let wrap = |e: Error| Error::SweepPoint {
                coords: describe(case, axes, coords),
                source: Box::new(e),
            };
            if let Some(c) = case {
                for (k, &v) in &c.set {
                    set_param(&mut config, k, v).map_err(wrap)?;
                }
            }
            for (axis, &v) in axes.iter().zip(coords) {
                set_param(&mut config, &axis.param, v).map_err(wrap)?;
            }
            config.validate().map_err(wrap)?;
            points.push((case, coords.clone(), config));
        }
    }

    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|p| (0..points[p].2.replicas as u64).map(move |r| (p, r)))
        .collect();
    let graphs = points
        .iter()
        .map(|(case, coords, config)| {
            config.build_graph().map_err(|e| Error::SweepPoint {
                coords: describe(*case, axes, coords),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fcs: Vec<f64> = with_pool(workers, || {
        jobs.par_iter()
            .map(|&(p, r)| {
                let (case, coords, config) = &points[p];
                engine::run_replica(config, &graphs[p], r)
                    .and_then(|m| cooperation_frequency(&m, config.metrics.tail))
                    .map_err(|e| Error::SweepPoint {
                        coords: describe(*case, axes, coords),
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::with_capacity(points.len());
    let mut offset = 0;
    for (case, coords, config) in &points {
        let s = summarize(&fcs[offset..offset + config.replicas]);
        offset += config.replicas;
        rows.push(SweepRow {
            case: case.map(|c| c.label.clone()),
            coords: coords.clone(),
            fc_mean: s.mean,
            fc_std: s.std,
            replicas: s.count,
        });
    }
    Ok(SweepResult {
        axes: axes.iter().map(|a| a.param.clone()).collect(),
        has_case: !cases.is_empty(),
        rows,
    })
}

/// Theory-vs-simulation occupancy row.
#[derive(Debug, Clone, PartialEq)]
pub struct DistRow {
    pub state: String,
    pub theory: f64,
    pub simulation: f64,
    pub relative_error: f64,
}

/// Mean post-burn-in occupancy over replicas against the stationary
/// expectation.
pub fn dist_table(config: &SimConfig, runs: &[RunMetrics]) -> Result<Vec<DistRow>> {
    let spec = config.game_spec()?;
    let n = config.network.node_count();
    let theory = expected_counts(&config.rates, n)?;
    let mut sim = vec![0.0; theory.len()];
    for m in runs {
        for (s, v) in sim.iter_mut().zip(mean_state_counts(m, config.metrics.burn_in)?) {
            *s += v / runs.len() as f64;
        }
    }
    theory
        .iter()
        .zip(&sim)
        .enumerate()
        .map(|(i, (&t, &s))| {
            Ok(DistRow {
                state: spec.name(i).to_string(),
                theory: t,
                simulation: s,
                relative_error: relative_error(t, s)?,
            })
        })
        .collect()
}

pub fn write_dist_table(path: &Path, rows: &[DistRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["state", "theory", "simulation", "relative_error"])?;
    for r in rows {
        w.write_record([
            r.state.clone(),
            r.theory.to_string(),
            r.simulation.to_string(),
            r.relative_error.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_dist_table(path: &Path) -> Result<Vec<DistRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let bad = || Error::validation(path.display().to_string(), "malformed dist table");
    if r.headers()? != vec!["state", "theory", "simulation", "relative_error"] {
        return Err(bad());
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad());
            Ok(DistRow {
                state: rec[0].to_string(),
                theory: num(1)?,
                simulation: num(2)?,
                relative_error: num(3)?,
            })
        })
        .collect()
}

/// Histogram pooled over replicas: per state, count -> probability.
pub fn pooled_histogram(runs: &[RunMetrics], burn_in: usize) -> Result<Vec<BTreeMap<usize, f64>>> {
    let mut pooled: Vec<BTreeMap<usize, f64>> = Vec::new();
    for m in runs {
        let h = engine::state_count_histogram(m, burn_in)?;
        pooled.resize(h.len(), BTreeMap::new());
        for (acc, state) in pooled.iter_mut().zip(h) {
            for (c, p) in state {
                *acc.entry(c).or_default() += p / runs.len() as f64;
            }
        }
    }
    Ok(pooled)
}

/// Per-schedule cooperation trajectory averaged over replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleCurve {
    pub schedule: ScheduleKind,
    pub times: Vec<f64>,
    pub fc: Vec<Summary>,
    pub final_fc: Summary,
}

pub fn schedule_curves(base: &SimConfig, schedules: &[ScheduleKind], workers: Option<usize>) -> Result<Vec<ScheduleCurve>> {
    with_pool(workers, || {
        schedules
            .par_iter()
            .map(|&schedule| {
                let mut config = base.clone();
                config.schedule = schedule;
                let runs = run_replicas(&config).map_err(|e| Error::SweepPoint {
                    coords: format!("schedule={}", schedule.label()),
                    source: Box::new(e),
                })?;
                let times = runs[0].sample_times.clone();
                let fc = (0..times.len())
                    .map(|i| summarize(&runs.iter().map(|m| m.coop_fraction[i]).collect::<Vec<_>>()))
                    .collect();
                let finals = runs
                    .iter()
                    .map(|m| cooperation_frequency(m, config.metrics.tail))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ScheduleCurve {
                    schedule,
                    times,
                    fc,
                    final_fc: summarize(&finals),
                })
            })
            .collect()
    })
}

/// Population variance of `fc_mean` across the rows of each case.
pub fn scale_variances(result: &SweepResult) -> Vec<(String, f64)> {
    let mut labels: Vec<String> = Vec::new();
    for row in &result.rows {
        let label = row.case.clone().unwrap_or_default();
        if !labels.contains(&label) {
            labels.push(label);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let values: Vec<f64> = result
                .rows
                .iter()
                .filter(|r| r.case.clone().unwrap_or_default() == label)
                .map(|r| r.fc_mean)
                .collect();
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
            (label, var)
        })
        .collect()
}

fn out_file(dir: &Path, name: &str, written: &mut Vec<PathBuf>) -> PathBuf {
    let p = dir.join(name);
    written.push(p.clone());
    p
}

/// Runs the experiment described by `spec` and writes its CSVs plus a
/// `manifest.toml` into `output_dir`. Returns the files written.
pub fn run_experiment(spec: &ExperimentSpec, output_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    let base = &spec.base;
    let exp = &spec.experiment;
    let mut written = Vec::new();

    match exp.kind {
        ExperimentKind::Timeseries => {
            let runs = with_pool(exp.workers, || run_replicas(base))?;
            for (r, m) in runs.iter().enumerate() {
                let name = if r == 0 { "fig3_timeseries.csv".to_string() } else { format!("fig3_timeseries_rep{r}.csv") };
                m.write_csv(&out_file(output_dir, &name, &mut written))?;
            }
        }
        ExperimentKind::Dist => {
            let runs = with_pool(exp.workers, || run_replicas(base))?;
            let spec_games = base.game_spec()?;
            let labels: Vec<String> = (0..spec_games.len()).map(|i| spec_games.name(i).to_string()).collect();
            let hist = pooled_histogram(&runs, base.metrics.burn_in)?;
            engine::write_histogram_csv(&out_file(output_dir, "fig4_histogram.csv", &mut written), &hist, &labels)?;
            let table = dist_table(base, &runs)?;
            write_dist_table(&out_file(output_dir, "tab2_dist.csv", &mut written), &table)?;
        }
        ExperimentKind::MuCurves | ExperimentKind::LambdaHeatmap | ExperimentKind::ScaleSweep => {
            let result = sweep(base, &exp.axes, &exp.cases, exp.workers)?;
            let name = match exp.kind {
                ExperimentKind::MuCurves => "fig6_mu_curves.csv",
                ExperimentKind::LambdaHeatmap => "fig7_lambda_heatmap.csv",
                _ => "fig11_scale_sweep.csv",
            };
            result.write_csv(&out_file(output_dir, name, &mut written))?;
            if exp.kind == ExperimentKind::ScaleSweep {
                let path = out_file(output_dir, "fig11_scale_variance.csv", &mut written);
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["case", "variance"])?;
                for (label, var) in scale_variances(&result) {
                    w.write_record([label, var.to_string()])?;
                }
                w.flush().map_err(|e| Error::io(&path, e))?;
            }
        }
        ExperimentKind::PayoffHeatmap => {
            let mut on = base.clone();
            on.reputation.enabled = true;
            sweep(&on, &exp.axes, &exp.cases, exp.workers)?
                .write_csv(&out_file(output_dir, "fig8_payoff_heatmap.csv", &mut written))?;
            if exp.ablation {
                let mut off = base.clone();
                off.reputation.enabled = false;
                sweep(&off, &exp.axes, &exp.cases, exp.workers)?
                    .write_csv(&out_file(output_dir, "fig9_payoff_heatmap_noreputation.csv", &mut written))?;
            }
        }
        ExperimentKind::ScheduleCompare => {
            let curves = schedule_curves(base, &exp.schedules, exp.workers)?;
            let path = out_file(output_dir, "fig10_schedule_compare.csv", &mut written);
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["schedule", "t", "fc_mean", "fc_std", "replicas"])?;
            for c in &curves {
                for (t, s) in c.times.iter().zip(&c.fc) {
                    w.write_record([c.schedule.label(), t.to_string(), s.mean.to_string(), s.std.to_string(), s.count.to_string()])?;
                }
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            let path = out_file(output_dir, "fig10_schedule_summary.csv", &mut written);
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["schedule", "fc_mean", "fc_std", "replicas"])?;
            for c in &curves {
                let s = c.final_fc;
                w.write_record([c.schedule.label(), s.mean.to_string(), s.std.to_string(), s.count.to_string()])?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
        }
    }

    let manifest = out_file(output_dir, "manifest.toml", &mut written);
    let text = format!(
        "# resolved experiment; replica r of every point draws from ChaCha8 keyed by (seed, r),\n\
         # one stream each for initialization, game transitions, update schedule and strategy draws\n{}",
        to_toml(spec)
    );
    std::fs::write(&manifest, text).map_err(|e| Error::io(&manifest, e))?;
    Ok(written)
}

//! Config files, experiment sweeps, CSV artifacts and the command line.

pub mod cli;
mod config;
mod experiment;

pub use config::{
    default_schedules, parse_config, parse_config_str, set_param, to_toml, Axis, Case, ExperimentKind,
    ExperimentSection, ExperimentSpec,
};
pub use experiment::{
    cooperation_summary, dist_table, pooled_histogram, read_dist_table, run_experiment, run_replicas,
    scale_variances, schedule_curves, summarize, sweep, worker_budget, write_dist_table, DistRow, ScheduleCurve,
    Summary, SweepResult, SweepRow, WORKERS_ENV,
};

use rand::Rng;
use rand_distr::{Distribution, Exp, Pareto};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// When agents revise their strategies.
///
/// `Fixed` updates every agent together at multiples of `interval`. The
/// other two kinds give every agent its own renewal process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleKind {
    Fixed { interval: f64 },
    Exponential { mean: f64 },
    /// Pareto intervals with survival `(xmin / x)^alpha` for `x >= xmin`,
    /// so the mean is `alpha * xmin / (alpha - 1)`.
    Powerlaw { alpha: f64, xmin: f64 },
}

impl Default for ScheduleKind {
    fn default() -> Self {
        ScheduleKind::Fixed { interval: 1.0 }
    }
}

impl ScheduleKind {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and positive, got {v}")))
            }
        };
        match *self {
            ScheduleKind::Fixed { interval } => positive("schedule.interval", interval),
            ScheduleKind::Exponential { mean } => positive("schedule.mean", mean),
            ScheduleKind::Powerlaw { alpha, xmin } => {
                positive("schedule.xmin", xmin)?;
                if alpha > 1.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("schedule.alpha", format!("must exceed 1, got {alpha}")))
                }
            }
        }
    }

    pub fn is_synchronous(&self) -> bool {
        matches!(self, ScheduleKind::Fixed { .. })
    }

    /// Mean time between two updates of one agent.
    pub fn mean_interval(&self) -> f64 {
        match *self {
            ScheduleKind::Fixed { interval } => interval,
            ScheduleKind::Exponential { mean } => mean,
            ScheduleKind::Powerlaw { alpha, xmin } => alpha * xmin / (alpha - 1.0),
        }
    }

    /// Short label used in CSV output, e.g. `fixed_0.5`.
    pub fn label(&self) -> String {
        match *self {
            ScheduleKind::Fixed { interval } => format!("fixed_{interval}"),
            ScheduleKind::Exponential { mean } => format!("exponential_{mean}"),
            ScheduleKind::Powerlaw { alpha, xmin } => format!("powerlaw_{alpha}_{xmin}"),
        }
    }
}

pub fn next_update_interval<R: Rng + ?Sized>(schedule: &ScheduleKind, rng: &mut R) -> f64 {
    match *schedule {
        ScheduleKind::Fixed { interval } => interval,
        ScheduleKind::Exponential { mean } => Exp::new(1.0 / mean).expect("validated mean").sample(rng),
        ScheduleKind::Powerlaw { alpha, xmin } => Pareto::new(xmin, alpha).expect("validated shape").sample(rng),
    }
}

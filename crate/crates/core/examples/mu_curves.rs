//! Cooperation frequency as mu1 grows, for two values of mu2.
//!
//! cargo run --release --example mu_curves [out_dir]

use std::path::PathBuf;

use evogame::engine::{NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{run_experiment, Axis, ExperimentKind, ExperimentSection, ExperimentSpec, SweepResult};

fn main() -> evogame::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/mu_curves".into()));
    let rates = TransitionRates::new(vec![0.03, 0.03], vec![0.05, 0.02])?;
    let mut base = SimConfig::new(NetworkSpec::Lattice { side: 50 }, rates);
    base.replicas = 3;
    base.horizon = 2000.0;
    base.metrics.tail = 200;

    let mut section = ExperimentSection::new(ExperimentKind::MuCurves);
    section.axes = vec![Axis::list("mu2", &[0.02, 0.06]), Axis::range("mu1", 0.01, 0.05, 0.01)];
    run_experiment(&ExperimentSpec::resolve(section, base)?, &out)?;

    let result = SweepResult::read_csv(&out.join("fig6_mu_curves.csv"))?;
    for row in &result.rows {
        println!("mu2 = {:.2}  mu1 = {:.2}  f_c = {:.3} ± {:.3}", row.coords[0], row.coords[1], row.fc_mean, row.fc_std);
    }
    Ok(())
}

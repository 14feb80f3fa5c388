//! (b, r) grid with and without reputation-weighted partner choice.
//!
//! cargo run --release --example payoff_ablation [out_dir]

use std::path::PathBuf;

use evogame::engine::{NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{run_experiment, Axis, ExperimentKind, ExperimentSection, ExperimentSpec, SweepResult};

fn main() -> evogame::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/payoff_ablation".into()));
    let rates = TransitionRates::new(vec![0.015, 0.01], vec![0.03, 0.02])?;
    let mut base = SimConfig::new(NetworkSpec::Lattice { side: 40 }, rates);
    base.replicas = 2;
    base.horizon = 1500.0;
    base.metrics.tail = 200;

    let mut section = ExperimentSection::new(ExperimentKind::PayoffHeatmap);
    section.axes = vec![Axis::list("b", &[1.1, 1.5, 1.9]), Axis::list("r", &[0.2, 0.5, 0.8])];
    run_experiment(&ExperimentSpec::resolve(section, base)?, &out)?;

    let on = SweepResult::read_csv(&out.join("fig8_payoff_heatmap.csv"))?;
    let off = SweepResult::read_csv(&out.join("fig9_payoff_heatmap_noreputation.csv"))?;
    println!("   b    r   with  without");
    for (a, b) in on.rows.iter().zip(&off.rows) {
        println!("{:.1}  {:.1}  {:.3}  {:.3}", a.coords[0], a.coords[1], a.fc_mean, b.fc_mean);
    }
    Ok(())
}

//! Cooperation over a (lambda1, lambda0) grid, printed as a small table.
//!
//! cargo run --release --example lambda_heatmap [out_dir]

use std::path::PathBuf;

use evogame::engine::{NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{run_experiment, Axis, ExperimentKind, ExperimentSection, ExperimentSpec, SweepResult};

fn main() -> evogame::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/lambda_heatmap".into()));
    let rates = TransitionRates::new(vec![0.03, 0.03], vec![0.03, 0.02])?;
    let mut base = SimConfig::new(NetworkSpec::Lattice { side: 40 }, rates);
    base.replicas = 2;
    base.horizon = 1500.0;
    base.metrics.tail = 200;

    let grid = [0.005, 0.02, 0.035, 0.05];
    let mut section = ExperimentSection::new(ExperimentKind::LambdaHeatmap);
    section.axes = vec![Axis::list("lambda1", &grid), Axis::list("lambda0", &grid)];
    run_experiment(&ExperimentSpec::resolve(section, base)?, &out)?;

    let result = SweepResult::read_csv(&out.join("fig7_lambda_heatmap.csv"))?;
    print!("lambda1\\lambda0");
    for l0 in grid {
        print!("{l0:>8}");
    }
    println!();
    for (i, l1) in grid.iter().enumerate() {
        print!("{l1:>15}");
        for row in &result.rows[i * grid.len()..(i + 1) * grid.len()] {
            print!("{:>8.3}", row.fc_mean);
        }
        println!();
    }
    Ok(())
}

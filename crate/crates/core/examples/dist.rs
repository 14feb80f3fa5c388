//! Stationary occupancy histograms against the closed form.
//!
//! cargo run --release --example dist

use evogame::engine::{histogram_mode, NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{dist_table, pooled_histogram, run_replicas};

fn main() -> evogame::Result<()> {
    let rates = TransitionRates::new(vec![0.01, 0.06], vec![0.04, 0.08])?;
    let mut config = SimConfig::new(NetworkSpec::WattsStrogatz { n: 1000, k: 4, p: 0.1, seed: None }, rates);
    config.replicas = 3;

    let runs = run_replicas(&config)?;
    let hist = pooled_histogram(&runs, config.metrics.burn_in)?;
    println!("{:>5} {:>10} {:>10} {:>8} {:>5}", "state", "theory", "sim", "rel.err", "mode");
    for (row, h) in dist_table(&config, &runs)?.iter().zip(&hist) {
        println!(
            "{:>5} {:>10.3} {:>10.3} {:>7.3}% {:>5}",
            row.state,
            row.theory,
            row.simulation,
            100.0 * row.relative_error,
            histogram_mode(h).unwrap_or(0)
        );
    }
    Ok(())
}

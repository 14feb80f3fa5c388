//! Fixed, exponential and power-law strategy-update intervals side by side.
//!
//! cargo run --release --example schedule_compare

use evogame::engine::{NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{default_schedules, schedule_curves};

fn main() -> evogame::Result<()> {
    let rates = TransitionRates::new(vec![0.03, 0.04], vec![0.03, 0.02])?;
    let mut base = SimConfig::new(NetworkSpec::WattsStrogatz { n: 2000, k: 4, p: 0.1, seed: None }, rates);
    base.replicas = 2;
    base.horizon = 2000.0;
    base.metrics.tail = 200;

    for curve in schedule_curves(&base, &default_schedules(), None)? {
        let at = |t: usize| curve.fc[t.min(curve.fc.len()) - 1].mean;
        println!(
            "{:<18} f_c(10) = {:.3}  f_c(100) = {:.3}  final = {:.3} ± {:.3}",
            curve.schedule.label(),
            at(10),
            at(100),
            curve.final_fc.mean,
            curve.final_fc.std
        );
    }
    Ok(())
}

//! Cooperation against network size for two payoff settings.
//!
//! cargo run --release --example scale_sweep

use evogame::engine::{NetworkSpec, SimConfig};
use evogame::gamespace::TransitionRates;
use evogame::harness::{scale_variances, sweep, Axis, Case};

fn main() -> evogame::Result<()> {
    let rates = TransitionRates::new(vec![0.015, 0.01], vec![0.03, 0.02])?;
    let mut base = SimConfig::new(NetworkSpec::WattsStrogatz { n: 1000, k: 4, p: 0.1, seed: None }, rates);
    base.replicas = 2;
    base.horizon = 2000.0;
    base.metrics.tail = 300;

    let case = |label: &str, r: f64, b: f64| Case {
        label: label.into(),
        set: [("r".to_string(), r), ("b".to_string(), b)].into(),
    };
    let cases = [case("r0.10_b1.30", 0.1, 1.3), case("r0.30_b1.60", 0.3, 1.6)];
    let result = sweep(&base, &[Axis::list("n", &[1000.0, 3000.0, 6000.0])], &cases, None)?;
    for row in &result.rows {
        println!("{:<12} n = {:>5}  f_c = {:.3}", row.case.as_deref().unwrap_or(""), row.coords[0], row.fc_mean);
    }
    for (label, var) in scale_variances(&result) {
        println!("{label}: variance across sizes {var:.2e}");
    }
    Ok(())
}

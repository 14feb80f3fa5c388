//! Closed-form stationary occupancy for a few birth–death chains.
//!
//! cargo run --example theory

use evogame::gamespace::{expected_counts, stationary_distribution, TransitionRates};

fn main() -> evogame::Result<()> {
    let n = 1000;
    for lambda0 in [0.01, 0.05, 0.09] {
        let rates = TransitionRates::new(vec![lambda0, 0.06], vec![0.04, 0.08])?;
        let pi = stationary_distribution(&rates)?.pi;
        let counts = expected_counts(&rates, n)?;
        println!("lambda0 = {lambda0}");
        for (i, (p, c)) in pi.iter().zip(&counts).enumerate() {
            println!("  G{i}: pi = {p:.6}  expected of {n} = {c:.3}");
        }
    }
    Ok(())
}

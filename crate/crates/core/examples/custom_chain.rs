//! A four-state chain with hand-written payoff matrices.
//!
//! Any number of game states works as long as `rates` has one fewer
//! transition than there are games.
//!
//! cargo run --release --example custom_chain

use evogame::engine::{cooperation_frequency, mean_state_counts, run, NetworkSpec, SimConfig};
use evogame::gamespace::{expected_counts, GameState, PayoffMatrix, TransitionRates};

fn main() -> evogame::Result<()> {
    let games = vec![
        GameState { name: "harsh PD".into(), matrix: PayoffMatrix::new(1.0, -0.2, 1.8, 0.0) },
        GameState { name: "PD".into(), matrix: PayoffMatrix::new(1.0, 0.0, 1.3, 0.0) },
        GameState { name: "snowdrift".into(), matrix: PayoffMatrix::new(1.0, 0.7, 1.3, 0.0) },
        GameState { name: "harmony".into(), matrix: PayoffMatrix::new(1.0, 0.5, 0.8, 0.0) },
    ];
    let rates = TransitionRates::new(vec![0.05, 0.04, 0.03], vec![0.02, 0.03, 0.06])?;
    let mut config = SimConfig::new(NetworkSpec::Lattice { side: 40 }, rates);
    config.games = Some(games.clone());
    config.horizon = 3000.0;
    config.validate()?;

    let graph = config.build_graph()?;
    let metrics = run(&config, &graph)?;
    let theory = expected_counts(&config.rates, graph.node_count())?;
    let sim = mean_state_counts(&metrics, config.metrics.burn_in)?;
    for ((g, t), s) in games.iter().zip(&theory).zip(&sim) {
        println!("{:<10} expected {t:>7.1}  observed {s:>7.1}", g.name);
    }
    println!("cooperation frequency {:.3}", cooperation_frequency(&metrics, config.metrics.tail)?);
    Ok(())
}

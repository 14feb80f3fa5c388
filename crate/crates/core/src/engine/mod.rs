//! Coupled simulation of game-state transitions and strategy updates.
//!
//! Every agent carries two independent clocks. Its game state jumps along
//! the birth–death chain at exponential times; its strategy is revised at
//! the instants produced by the [`ScheduleKind`]. Events are processed in
//! global time order and the population is sampled at `t = dt, 2dt, …`.
//! At equal times game events run first, then strategy updates, then the
//! sample is taken.

mod metrics;
mod schedule;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

pub use metrics::{
    cooperation_frequency, histogram_mode, mean_state_counts, relative_error, state_count_histogram,
    write_histogram_csv, RunMetrics,
};
pub use schedule::{next_update_interval, ScheduleKind};

use crate::error::{Error, Result};
use crate::gamespace::{self, GameSpec, GameState, TransitionRates};
use crate::population::{self, GameEvent, InitParams, UpdateParams};
use crate::rng::{stream, Stream};
use crate::topology::{self, Graph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSpec {
    /// Periodic `side × side` square lattice.
    Lattice { side: usize },
    /// Watts–Strogatz graph. The graph seed defaults to the run seed.
    WattsStrogatz {
        n: usize,
        #[serde(default = "default_ws_k")]
        k: usize,
        #[serde(default = "default_ws_p")]
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

fn default_ws_k() -> usize {
    4
}

fn default_ws_p() -> f64 {
    0.1
}

impl NetworkSpec {
    pub fn node_count(&self) -> usize {
        match *self {
            NetworkSpec::Lattice { side } => side * side,
            NetworkSpec::WattsStrogatz { n, .. } => n,
        }
    }

    pub fn build(&self, run_seed: u64) -> Result<Graph> {
        match *self {
            NetworkSpec::Lattice { side } => topology::make_square_lattice(side),
            NetworkSpec::WattsStrogatz { n, k, p, seed } => {
                topology::make_watts_strogatz(n, k, p, seed.unwrap_or(run_seed))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PayoffParams {
    pub b: f64,
    pub r: f64,
}

impl Default for PayoffParams {
    fn default() -> Self {
        PayoffParams { b: 1.5, r: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReputationParams {
    pub enabled: bool,
    pub delta: f64,
    pub init_mean: f64,
    pub init_sigma: f64,
}

impl Default for ReputationParams {
    fn default() -> Self {
        ReputationParams {
            enabled: true,
            delta: 0.04,
            init_mean: 2.0,
            init_sigma: 0.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricsParams {
    /// Spacing of sample times.
    pub sample_interval: f64,
    /// Samples skipped before histograms and occupancy means.
    pub burn_in: usize,
    /// Samples averaged for the final cooperation frequency.
    pub tail: usize,
}

impl Default for MetricsParams {
    fn default() -> Self {
        MetricsParams {
            sample_interval: 1.0,
            burn_in: 1000,
            tail: 500,
        }
    }
}

fn default_seed() -> u64 {
    1
}
fn default_replicas() -> usize {
    5
}
fn default_horizon() -> f64 {
    1e4
}
fn default_kappa() -> f64 {
    0.1
}
fn default_coop_probability() -> f64 {
    0.5
}

/// Everything needed to reproduce one run (or a set of replicas).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_replicas")]
    pub replicas: usize,
    /// Total simulated time.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// Fermi noise.
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    /// Probability that an agent starts as a cooperator.
    #[serde(default = "default_coop_probability")]
    pub coop_probability: f64,
    pub network: NetworkSpec,
    #[serde(default)]
    pub payoff: PayoffParams,
    /// Explicit game chain; when absent the standard PDG/SDG/SHG chain
    /// built from `payoff` is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub games: Option<Vec<GameState>>,
    pub rates: TransitionRates,
    #[serde(default)]
    pub reputation: ReputationParams,
    #[serde(default)]
    pub schedule: ScheduleKind,
    #[serde(default)]
    pub metrics: MetricsParams,
}

impl SimConfig {
    /// Default parameters on the given network and rates.
    pub fn new(network: NetworkSpec, rates: TransitionRates) -> Self {
        SimConfig {
            seed: default_seed(),
            replicas: default_replicas(),
            horizon: default_horizon(),
            kappa: default_kappa(),
            coop_probability: default_coop_probability(),
            network,
            payoff: PayoffParams::default(),
            games: None,
            rates,
            reputation: ReputationParams::default(),
            schedule: ScheduleKind::default(),
            metrics: MetricsParams::default(),
        }
    }

    pub fn game_spec(&self) -> Result<GameSpec> {
        match &self.games {
            Some(states) => GameSpec::new(states.clone()),
            None => Ok(GameSpec::standard(self.payoff.b, self.payoff.r)),
        }
    }

    pub fn update_params(&self) -> UpdateParams {
        UpdateParams {
            kappa: self.kappa,
            delta: self.reputation.delta,
            reputation_enabled: self.reputation.enabled,
        }
    }

    pub fn init_params(&self) -> InitParams {
        InitParams {
            coop_probability: self.coop_probability,
            rep_mean: self.reputation.init_mean,
            rep_sigma: self.reputation.init_sigma,
        }
    }

    /// Number of samples a run records.
    pub fn sample_count(&self) -> usize {
        (self.horizon / self.metrics.sample_interval + 1e-9).floor() as usize
    }

    pub fn build_graph(&self) -> Result<Graph> {
        self.network.build(self.seed)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(key, format!("must be finite and positive, got {v}")))
            }
        };
        positive("horizon", self.horizon)?;
        positive("kappa", self.kappa)?;
        positive("reputation.delta", self.reputation.delta)?;
        positive("metrics.sample_interval", self.metrics.sample_interval)?;
        if self.replicas == 0 {
            return Err(Error::validation("replicas", "must be at least 1"));
        }
        self.rates
            .validate()
            .map_err(|e| Error::validation("rates", e.to_string()))?;
        self.init_params()
            .validate()
            .map_err(|e| Error::validation("reputation", e.to_string()))?;
        self.schedule
            .validate()
            .map_err(|e| Error::validation("schedule", e.to_string()))?;
        let spec = self.game_spec().map_err(|e| Error::validation("games", e.to_string()))?;
        if spec.len() != self.rates.state_count() {
            return Err(Error::validation(
                "rates",
                format!(
                    "{} transitions describe {} states but the game chain has {}",
                    self.rates.lambda.len(),
                    self.rates.state_count(),
                    spec.len()
                ),
            ));
        }
        if self.sample_count() == 0 {
            return Err(Error::validation("horizon", "shorter than one sample interval"));
        }
        match self.network {
            NetworkSpec::Lattice { side } if side < 3 => {
                Err(Error::validation("network.side", "must be at least 3"))
            }
            NetworkSpec::WattsStrogatz { n, k, p, .. } if k == 0 || k % 2 != 0 || k >= n || !(0.0..=1.0).contains(&p) => {
                Err(Error::validation("network", "Watts–Strogatz needs even 0 < k < n and p in [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

/// Min-heap entry keyed by time, ties broken by node id.
#[derive(Debug, Clone, Copy)]
struct Pending {
    time: f64,
    node: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Runs replica 0 of `config`.
pub fn run(config: &SimConfig, graph: &Graph) -> Result<RunMetrics> {
    run_replica(config, graph, 0)
}

/// Runs one replica. Output depends only on `(config, graph, replica)`.
pub fn run_replica(config: &SimConfig, graph: &Graph, replica: u64) -> Result<RunMetrics> {
    config.validate()?;
    if let Some(u) = (0..graph.node_count()).find(|&u| graph.neighbors(u).is_empty()) {
        return Err(Error::IsolatedNode(u));
    }
    let spec = config.game_spec()?;
    let rates = &config.rates;
    let params = config.update_params();
    let n = graph.node_count();
    let states = rates.state_count();

    let mut init_rng = stream(config.seed, replica, Stream::Init);
    let mut game_rng = stream(config.seed, replica, Stream::GameTransitions);
    let mut sched_rng = stream(config.seed, replica, Stream::Schedule);
    let mut strat_rng = stream(config.seed, replica, Stream::Strategy);

    let mut pop = population::init_population(graph, &config.init_params(), &mut init_rng)?;

    let mut game_queue = BinaryHeap::with_capacity(n);
    for (node, agent) in pop.agents.iter_mut().enumerate() {
        let (hold, target) = gamespace::sample_unchecked(agent.game_state, rates, &mut game_rng);
        agent.next_game_event = GameEvent { time: hold, target };
        game_queue.push(Pending { time: hold, node });
    }

    let everyone: Vec<usize> = (0..n).collect();
    let mut update_queue = BinaryHeap::new();
    let mut round = 1u64;
    let round_interval = match config.schedule {
        ScheduleKind::Fixed { interval } => {
            for agent in &mut pop.agents {
                agent.next_update_time = interval;
            }
            interval
        }
        _ => {
            update_queue.reserve(n);
            for (node, agent) in pop.agents.iter_mut().enumerate() {
                agent.next_update_time = next_update_interval(&config.schedule, &mut sched_rng);
                update_queue.push(Pending {
                    time: agent.next_update_time,
                    node,
                });
            }
            f64::INFINITY
        }
    };

    let mut counts = pop.state_counts(states);
    let mut cooperators = pop.cooperators();
    let dt = config.metrics.sample_interval;
    let total_samples = config.sample_count();
    let mut metrics = RunMetrics {
        sample_times: Vec::with_capacity(total_samples),
        state_counts: Vec::with_capacity(total_samples),
        coop_fraction: Vec::with_capacity(total_samples),
    };

    let mut sample = 1usize;
    while sample <= total_samples {
        let t_sample = sample as f64 * dt;
        let t_game = game_queue.peek().map_or(f64::INFINITY, |p| p.time);
        let t_update = if config.schedule.is_synchronous() {
            round as f64 * round_interval
        } else {
            update_queue.peek().map_or(f64::INFINITY, |p: &Pending| p.time)
        };

        if t_game <= t_update && t_game <= t_sample {
            let Pending { time, node } = game_queue.pop().expect("peeked");
            pop.time = time;
            let agent = &mut pop.agents[node];
            counts[agent.game_state] -= 1;
            agent.game_state = agent.next_game_event.target;
            counts[agent.game_state] += 1;
            let (hold, target) = gamespace::sample_unchecked(agent.game_state, rates, &mut game_rng);
            agent.next_game_event = GameEvent {
                time: time + hold,
                target,
            };
            game_queue.push(Pending { time: time + hold, node });
        } else if t_update <= t_sample {
            pop.time = t_update;
            if config.schedule.is_synchronous() {
                population::strategy_update_round(&mut pop, graph, &spec, &params, &everyone, &mut strat_rng)?;
                round += 1;
                let next = round as f64 * round_interval;
                for agent in &mut pop.agents {
                    agent.next_update_time = next;
                }
                cooperators = pop.cooperators();
            } else {
                let Pending { time, node } = update_queue.pop().expect("peeked");
                let before = pop.agents[node].strategy.is_cooperator();
                population::individual_update(node, &mut pop, graph, &spec, &params, &mut strat_rng)?;
                let after = pop.agents[node].strategy.is_cooperator();
                match (before, after) {
                    (true, false) => cooperators -= 1,
                    (false, true) => cooperators += 1,
                    _ => {}
                }
                let next = time + next_update_interval(&config.schedule, &mut sched_rng);
                pop.agents[node].next_update_time = next;
                update_queue.push(Pending { time: next, node });
            }
        } else {
            pop.time = t_sample;
            metrics.push(t_sample, counts.clone(), cooperators as f64 / n as f64);
            sample += 1;
        }
    }
    Ok(metrics)
}

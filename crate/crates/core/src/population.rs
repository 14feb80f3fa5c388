//! Agents and the rules that change their strategies and reputations.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamespace::GameSpec;
use crate::topology::Graph;

/// Upper bound of the reputation scale.
pub const REPUTATION_MAX: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Cooperate,
    Defect,
}

impl Strategy {
    pub fn is_cooperator(self) -> bool {
        self == Strategy::Cooperate
    }
}

/// A pending game-state transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameEvent {
    pub time: f64,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub strategy: Strategy,
    pub reputation: f64,
    pub game_state: usize,
    pub next_game_event: GameEvent,
    pub next_update_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    pub agents: Vec<Agent>,
    pub time: f64,
}

impl PopulationState {
    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Number of agents in each game state.
    pub fn state_counts(&self, state_count: usize) -> Vec<usize> {
        let mut counts = vec![0; state_count];
        for a in &self.agents {
            counts[a.game_state] += 1;
        }
        counts
    }

    pub fn cooperators(&self) -> usize {
        self.agents.iter().filter(|a| a.strategy.is_cooperator()).count()
    }
}

/// How the initial population is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitParams {
    /// Probability that an agent starts as a cooperator.
    pub coop_probability: f64,
    pub rep_mean: f64,
    pub rep_sigma: f64,
}

impl Default for InitParams {
    fn default() -> Self {
        InitParams {
            coop_probability: 0.5,
            rep_mean: 2.0,
            rep_sigma: 0.6,
        }
    }
}

impl InitParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.coop_probability) {
            return Err(Error::invalid("coop_probability", "must lie in [0, 1]"));
        }
        if !(self.rep_mean > 0.0 && self.rep_mean < REPUTATION_MAX) {
            return Err(Error::invalid("rep_mean", "must lie in (0, 4)"));
        }
        if !(self.rep_sigma >= 0.0 && self.rep_sigma.is_finite()) {
            return Err(Error::invalid("rep_sigma", "must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// Parameters of a strategy update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateParams {
    /// Fermi noise.
    pub kappa: f64,
    /// Reputation step.
    pub delta: f64,
    /// When false, the imitation partner is drawn uniformly.
    pub reputation_enabled: bool,
}

impl Default for UpdateParams {
    fn default() -> Self {
        UpdateParams {
            kappa: 0.1,
            delta: 0.04,
            reputation_enabled: true,
        }
    }
}

/// Everyone starts in `G0` with a fair-coin strategy (or `coop_probability`)
/// and a Gaussian reputation resampled until it falls in `(0, 4)`. Event
/// times are left at zero for the engine to fill in.
pub fn init_population<R: Rng + ?Sized>(
    graph: &Graph,
    init: &InitParams,
    rng: &mut R,
) -> Result<PopulationState> {
    init.validate()?;
    let normal = Normal::new(init.rep_mean, init.rep_sigma)
        .map_err(|e| Error::invalid("rep_sigma", e.to_string()))?;
    let agents = (0..graph.node_count())
        .map(|_| {
            let strategy = if rng.random::<f64>() < init.coop_probability {
                Strategy::Cooperate
            } else {
                Strategy::Defect
            };
            let reputation = loop {
                let x = normal.sample(rng);
                if x > 0.0 && x < REPUTATION_MAX {
                    break x;
                }
            };
            Agent {
                strategy,
                reputation,
                game_state: 0,
                next_game_event: GameEvent { time: 0.0, target: 0 },
                next_update_time: 0.0,
            }
        })
        .collect();
    Ok(PopulationState { agents, time: 0.0 })
}

/// Total payoff of `focal` against its whole neighborhood, each encounter
/// scored with the focal agent's own game matrix.
#[inline]
pub fn accumulate_payoff(focal: usize, pop: &PopulationState, graph: &Graph, spec: &GameSpec) -> f64 {
    let me = &pop.agents[focal];
    let matrix = spec.matrix(me.game_state);
    graph
        .neighbors(focal)
        .iter()
        .map(|&v| matrix.payoff(me.strategy, pop.agents[v].strategy))
        .sum()
}

/// One reputation step: up by `delta` after cooperating (capped at 4), down
/// after defecting; a step that would reach zero or below lands on `delta/2`.
pub fn update_reputation(rep: f64, strategy_last_round: Strategy, delta: f64) -> f64 {
    match strategy_last_round {
        Strategy::Cooperate => {
            if rep + delta > REPUTATION_MAX {
                REPUTATION_MAX
            } else {
                rep + delta
            }
        }
        Strategy::Defect => {
            if rep - delta <= 0.0 {
                delta / 2.0
            } else {
                rep - delta
            }
        }
    }
}

/// Probability of picking each of `focal`'s neighbors (in adjacency order)
/// as the imitation partner.
pub fn selection_weights(focal: usize, pop: &PopulationState, graph: &Graph, reputation_enabled: bool) -> Vec<f64> {
    let nbrs = graph.neighbors(focal);
    if !reputation_enabled {
        return vec![1.0 / nbrs.len() as f64; nbrs.len()];
    }
    let total: f64 = nbrs.iter().map(|&v| pop.agents[v].reputation).sum();
    nbrs.iter().map(|&v| pop.agents[v].reputation / total).collect()
}

/// Picks the neighbor whose strategy `focal` will consider, with probability
/// proportional to reputation (or uniformly when reputation is disabled).
pub fn select_neighbor<R: Rng + ?Sized>(
    focal: usize,
    pop: &PopulationState,
    graph: &Graph,
    reputation_enabled: bool,
    rng: &mut R,
) -> Result<usize> {
    graph.check_node(focal)?;
    if graph.neighbors(focal).is_empty() {
        return Err(Error::IsolatedNode(focal));
    }
    Ok(select_unchecked(focal, pop, graph, reputation_enabled, rng))
}

#[inline]
fn select_unchecked<R: Rng + ?Sized>(
    focal: usize,
    pop: &PopulationState,
    graph: &Graph,
    reputation_enabled: bool,
    rng: &mut R,
) -> usize {
    let nbrs = graph.neighbors(focal);
    if !reputation_enabled || nbrs.len() == 1 {
        return nbrs[rng.random_range(0..nbrs.len())];
    }
    let total: f64 = nbrs.iter().map(|&v| pop.agents[v].reputation).sum();
    let mut target = rng.random::<f64>() * total;
    for &v in nbrs {
        target -= pop.agents[v].reputation;
        if target < 0.0 {
            return v;
        }
    }
    // rounding left a sliver past the last bucket
    nbrs[nbrs.len() - 1]
}

/// Fermi imitation probability `1 / (1 + exp((u_focal - u_neighbor) / kappa))`.
pub fn fermi_adopt_probability(u_focal: f64, u_neighbor: f64, kappa: f64) -> f64 {
    let x = (u_focal - u_neighbor) / kappa;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Synchronous update of the agents listed in `due`.
///
/// All payoffs and partner choices are evaluated against the state on entry;
/// adoptions and reputation steps are then applied together. Reputation
/// moves according to the strategy held before this round.
pub fn strategy_update_round<R: Rng + ?Sized>(
    pop: &mut PopulationState,
    graph: &Graph,
    spec: &GameSpec,
    params: &UpdateParams,
    due: &[usize],
    rng: &mut R,
) -> Result<()> {
    for &focal in due {
        graph.check_node(focal)?;
        if graph.neighbors(focal).is_empty() {
            return Err(Error::IsolatedNode(focal));
        }
    }
    let snapshot: &PopulationState = pop;
    let mut payoff_cache = vec![f64::NAN; snapshot.len()];
    let mut payoff = |node: usize| {
        let cached = payoff_cache[node];
        if cached.is_nan() {
            let u = accumulate_payoff(node, snapshot, graph, spec);
            payoff_cache[node] = u;
            u
        } else {
            cached
        }
    };

    let mut next_strategy = Vec::with_capacity(due.len());
    for &focal in due {
        let partner = select_unchecked(focal, snapshot, graph, params.reputation_enabled, rng);
        let mine = snapshot.agents[focal].strategy;
        let theirs = snapshot.agents[partner].strategy;
        let adopted = if mine == theirs {
            mine
        } else {
            let p = fermi_adopt_probability(payoff(focal), payoff(partner), params.kappa);
            if rng.random::<f64>() < p {
                theirs
            } else {
                mine
            }
        };
        next_strategy.push(adopted);
    }

    for (&focal, strategy) in due.iter().zip(next_strategy) {
        let agent = &mut pop.agents[focal];
        agent.reputation = update_reputation(agent.reputation, agent.strategy, params.delta);
        agent.strategy = strategy;
    }
    Ok(())
}

/// Asynchronous update of a single agent against the current state.
pub fn individual_update<R: Rng + ?Sized>(
    focal: usize,
    pop: &mut PopulationState,
    graph: &Graph,
    spec: &GameSpec,
    params: &UpdateParams,
    rng: &mut R,
) -> Result<()> {
    strategy_update_round(pop, graph, spec, params, &[focal], rng)
}

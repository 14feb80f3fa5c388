//! Game states, payoff matrices and the birth–death chain that moves each
//! agent between them.
//!
//! States are ordered `G0..Gn`. An agent in `Gi` moves up to `Gi+1` at rate
//! `lambda[i]` and down to `Gi-1` at rate `mu[i-1]` (so `mu[0]` is the rate
//! `G1 -> G0`). Holding times are exponential, which makes the chain a
//! continuous-time Markov chain with a product-form stationary law.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Strategy;

/// Row-player payoffs of a symmetric 2×2 game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffMatrix {
    /// Reward for mutual cooperation.
    #[serde(rename = "R")]
    pub reward: f64,
    /// Sucker's payoff: cooperating against a defector.
    #[serde(rename = "S")]
    pub sucker: f64,
    /// Temptation: defecting against a cooperator.
    #[serde(rename = "T")]
    pub temptation: f64,
    /// Punishment for mutual defection.
    #[serde(rename = "P")]
    pub punishment: f64,
}

impl PayoffMatrix {
    pub const fn new(reward: f64, sucker: f64, temptation: f64, punishment: f64) -> Self {
        PayoffMatrix {
            reward,
            sucker,
            temptation,
            punishment,
        }
    }

    /// Payoff to a `focal` player facing `other`.
    #[inline]
    pub fn payoff(&self, focal: Strategy, other: Strategy) -> f64 {
        match (focal, other) {
            (Strategy::Cooperate, Strategy::Cooperate) => self.reward,
            (Strategy::Cooperate, Strategy::Defect) => self.sucker,
            (Strategy::Defect, Strategy::Cooperate) => self.temptation,
            (Strategy::Defect, Strategy::Defect) => self.punishment,
        }
    }

    /// `[[R, S], [T, P]]`.
    pub fn rows(&self) -> [[f64; 2]; 2] {
        [[self.reward, self.sucker], [self.temptation, self.punishment]]
    }
}

/// The three standard social dilemmas, parameterized by `b` (prisoner's
/// dilemma temptation) and `r` (snowdrift and stag-hunt cost ratio).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardMatrices {
    pub pdg: PayoffMatrix,
    pub sdg: PayoffMatrix,
    pub shg: PayoffMatrix,
}

pub fn standard_matrices(b: f64, r: f64) -> StandardMatrices {
    StandardMatrices {
        pdg: PayoffMatrix::new(1.0, 0.0, b, 0.0),
        sdg: PayoffMatrix::new(1.0, 1.0 - r, 1.0 + r, 0.0),
        shg: PayoffMatrix::new(1.0, -r, r, 0.0),
    }
}

/// True when the matrix describes a social dilemma: mutual cooperation
/// beats mutual defection and being exploited, is collectively best, and
/// there is either greed (`T > R`) or fear (`P > S`).
pub fn validate_dilemma(m: &PayoffMatrix) -> bool {
    m.reward > m.punishment
        && m.reward > m.sucker
        && 2.0 * m.reward > m.temptation + m.sucker
        && (m.temptation > m.reward || m.punishment > m.sucker)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub name: String,
    pub matrix: PayoffMatrix,
}

/// Ordered game-state space `G0..Gn`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    states: Vec<GameState>,
}

impl GameSpec {
    pub fn new(states: Vec<GameState>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::invalid("games", "need at least two game states"));
        }
        Ok(GameSpec { states })
    }

    /// `PDG -> SDG -> SHG`.
    pub fn standard(b: f64, r: f64) -> Self {
        let m = standard_matrices(b, r);
        GameSpec {
            states: vec![
                GameState { name: "PDG".into(), matrix: m.pdg },
                GameState { name: "SDG".into(), matrix: m.sdg },
                GameState { name: "SHG".into(), matrix: m.shg },
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[GameState] {
        &self.states
    }

    #[inline]
    pub fn matrix(&self, state: usize) -> &PayoffMatrix {
        &self.states[state].matrix
    }

    pub fn name(&self, state: usize) -> &str {
        &self.states[state].name
    }
}

/// Birth–death transition rates. `lambda[i]` is `Gi -> Gi+1`, `mu[i]` is
/// `Gi+1 -> Gi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRates {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl TransitionRates {
    pub fn new(lambda: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        let rates = TransitionRates { lambda, mu };
        rates.validate()?;
        Ok(rates)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.is_empty() {
            return Err(Error::InvalidRates("need at least one transition (two states)".into()));
        }
        if self.lambda.len() != self.mu.len() {
            return Err(Error::InvalidRates(format!(
                "lambda has {} entries but mu has {}",
                self.lambda.len(),
                self.mu.len()
            )));
        }
        for (name, seq) in [("lambda", &self.lambda), ("mu", &self.mu)] {
            for (i, &rate) in seq.iter().enumerate() {
                if !(rate > 0.0 && rate.is_finite()) {
                    return Err(Error::InvalidRates(format!(
                        "{name}[{i}] = {rate}; every rate must be finite and strictly positive"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.lambda.len() + 1
    }

    /// Rate out of `state` towards `state + 1` (zero at the top).
    #[inline]
    pub fn up(&self, state: usize) -> f64 {
        self.lambda.get(state).copied().unwrap_or(0.0)
    }

    /// Rate out of `state` towards `state - 1` (zero at the bottom).
    #[inline]
    pub fn down(&self, state: usize) -> f64 {
        if state == 0 {
            0.0
        } else {
            self.mu[state - 1]
        }
    }

    #[inline]
    pub fn exit_rate(&self, state: usize) -> f64 {
        self.up(state) + self.down(state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
}

/// Closed-form stationary law of the birth–death chain:
/// `pi[k] ∝ (lambda[0]·…·lambda[k-1]) / (mu[0]·…·mu[k-1])`.
pub fn stationary_distribution(rates: &TransitionRates) -> Result<StationaryDistribution> {
    rates.validate()?;
    let mut weights = Vec::with_capacity(rates.state_count());
    let mut w = 1.0_f64;
    weights.push(w);
    for (&up, &down) in rates.lambda.iter().zip(&rates.mu) {
        w *= up / down;
        if w > 1e200 {
            for x in weights.iter_mut() {
                *x *= 1e-200;
            }
            w *= 1e-200;
        }
        weights.push(w);
    }
    let total: f64 = weights.iter().sum();
    Ok(StationaryDistribution {
        pi: weights.into_iter().map(|x| x / total).collect(),
    })
}

/// Expected number of agents per state once the population is stationary.
pub fn expected_counts(rates: &TransitionRates, n: usize) -> Result<Vec<f64>> {
    let dist = stationary_distribution(rates)?;
    Ok(dist.pi.iter().map(|p| n as f64 * p).collect())
}

/// Draws how long an agent stays in `current` and where it goes next.
pub fn sample_holding_and_target<R: Rng + ?Sized>(
    current: usize,
    rates: &TransitionRates,
    rng: &mut R,
) -> Result<(f64, usize)> {
    let count = rates.state_count();
    if current >= count {
        return Err(Error::StateOutOfRange {
            state: current,
            state_count: count,
        });
    }
    Ok(sample_unchecked(current, rates, rng))
}

#[inline]
pub(crate) fn sample_unchecked<R: Rng + ?Sized>(
    current: usize,
    rates: &TransitionRates,
    rng: &mut R,
) -> (f64, usize) {
    let up = rates.up(current);
    let down = rates.down(current);
    let total = up + down;
    let holding = Exp::new(total).expect("positive exit rate").sample(rng);
    let next = if down == 0.0 {
        current + 1
    } else if up == 0.0 {
        current - 1
    } else if rng.random::<f64>() * total < up {
        current + 1
    } else {
        current - 1
    };
    (holding, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    fn reference_rates(lambda0: f64) -> TransitionRates {
        TransitionRates::new(vec![lambda0, 0.06], vec![0.04, 0.08]).unwrap()
    }

    #[test]
    fn standard_matrices_values() {
        let m = standard_matrices(1.5, 0.5);
        assert_eq!(m.pdg.rows(), [[1.0, 0.0], [1.5, 0.0]]);
        assert_eq!(m.sdg.rows(), [[1.0, 0.5], [1.5, 0.0]]);
        assert_eq!(m.shg.rows(), [[1.0, -0.5], [0.5, 0.0]]);
    }

    #[test]
    fn dilemma_validation() {
        let m = standard_matrices(1.5, 0.5);
        assert!(validate_dilemma(&m.pdg));
        assert!(validate_dilemma(&m.shg));
        // snowdrift always has T + S = 2R, on the edge of the third condition
        assert!(!validate_dilemma(&m.sdg));
        assert!(!validate_dilemma(&PayoffMatrix::new(1.0, 0.5, 0.5, 0.0)));
    }

    #[test]
    fn stationary_reference_values() {
        let pi = stationary_distribution(&reference_rates(0.01)).unwrap().pi;
        for (got, want) in pi.iter().zip([0.695652, 0.173913, 0.130435]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn symmetric_two_state_chain() {
        let rates = TransitionRates::new(vec![0.3], vec![0.3]).unwrap();
        assert_eq!(stationary_distribution(&rates).unwrap().pi, vec![0.5, 0.5]);
    }

    #[test]
    fn expected_counts_reference_values() {
        let c = expected_counts(&reference_rates(0.01), 1000).unwrap();
        for (got, want) in c.iter().zip([695.652, 173.913, 130.435]) {
            assert!((got - want).abs() < 1e-3);
        }
        let rates = TransitionRates::new(vec![0.02, 0.02], vec![0.04, 0.08]).unwrap();
        let c = expected_counts(&rates, 1000).unwrap();
        for (got, want) in c.iter().zip([615.385, 307.692, 76.923]) {
            assert!((got - want).abs() < 1e-3);
        }
        assert_eq!(expected_counts(&rates, 0).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn rejects_invalid_rates() {
        assert!(TransitionRates::new(vec![0.1, -0.1], vec![0.1, 0.1]).is_err());
        assert!(TransitionRates::new(vec![0.1, 0.0], vec![0.1, 0.1]).is_err());
        assert!(TransitionRates::new(vec![0.1], vec![0.1, 0.1]).is_err());
        assert!(TransitionRates::new(vec![], vec![]).is_err());
        let bad = TransitionRates { lambda: vec![0.1], mu: vec![f64::NAN] };
        assert!(matches!(stationary_distribution(&bad), Err(Error::InvalidRates(_))));
    }

    #[test]
    fn long_chains_do_not_overflow() {
        let rates = TransitionRates::new(vec![1e6; 200], vec![1e-6; 200]).unwrap();
        let pi = stationary_distribution(&rates).unwrap().pi;
        assert!(pi.iter().all(|p| p.is_finite()));
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((pi[200] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_states_have_one_exit() {
        let rates = reference_rates(0.01);
        let mut rng = stream(1, 0, Stream::GameTransitions);
        let draws = 100_000;
        let mut total = 0.0;
        for _ in 0..draws {
            let (h, next) = sample_holding_and_target(0, &rates, &mut rng).unwrap();
            assert_eq!(next, 1);
            total += h;
        }
        let mean = total / draws as f64;
        assert!((mean - 100.0).abs() / 100.0 < 0.01, "mean holding {mean}");
        for _ in 0..1000 {
            assert_eq!(sample_holding_and_target(2, &rates, &mut rng).unwrap().1, 1);
        }
        assert!(sample_holding_and_target(3, &rates, &mut rng).is_err());
    }

    #[test]
    fn interior_state_competing_exponentials() {
        // lambda1 = 0.06 up, mu1 = 0.04 down: P(up) = 0.6, mean holding 10
        let rates = TransitionRates::new(vec![0.01, 0.06], vec![0.04, 0.08]).unwrap();
        let mut rng = stream(2, 0, Stream::GameTransitions);
        let draws = 200_000;
        let (mut up, mut total) = (0usize, 0.0);
        for _ in 0..draws {
            let (h, next) = sample_holding_and_target(1, &rates, &mut rng).unwrap();
            total += h;
            if next == 2 {
                up += 1;
            }
        }
        let p_up = up as f64 / draws as f64;
        let mean = total / draws as f64;
        assert!((p_up - 0.6).abs() / 0.6 < 0.01, "P(up) {p_up}");
        assert!((mean - 10.0).abs() / 10.0 < 0.01, "mean {mean}");
    }

    #[test]
    fn single_agent_occupancy_converges() {
        let rates = TransitionRates::new(vec![0.02, 0.06], vec![0.04, 0.08]).unwrap();
        let pi = stationary_distribution(&rates).unwrap().pi;
        let mut rng = stream(3, 0, Stream::GameTransitions);
        // the slowest relaxation mode is ~27 time units, so 1e7 puts 1% at
        // about two standard errors of the G2 fraction
        let horizon = 1e7;
        let mut occupancy = [0.0; 3];
        let (mut t, mut state) = (0.0, 0usize);
        while t < horizon {
            let (h, next) = sample_holding_and_target(state, &rates, &mut rng).unwrap();
            occupancy[state] += h.min(horizon - t);
            t += h;
            state = next;
        }
        for (k, occ) in occupancy.iter().enumerate() {
            let frac = occ / horizon;
            assert!((frac - pi[k]).abs() / pi[k] < 0.01, "state {k}: {frac} vs {}", pi[k]);
        }
    }
}

//! Evolutionary games on networks where each agent's game drifts along a
//! birth–death Markov chain of payoff matrices, strategies are imitated
//! through a reputation-weighted Fermi rule, and the closed-form stationary
//! occupancy of the game chain can be checked against simulation.
//!
//! The crate is organized bottom-up:
//!
//! - [`topology`]: lattice and Watts–Strogatz interaction graphs.
//! - [`gamespace`]: payoff matrices, transition rates, stationary analytics
//!   and the per-agent transition sampler.
//! - [`population`]: agents, payoffs, reputation and imitation rules.
//! - [`engine`]: the event-driven simulation loop and run metrics.
//! - [`harness`]: config files, experiment sweeps, CSV output and the CLI.

pub mod engine;
pub mod error;
pub mod gamespace;
pub mod harness;
pub mod population;
pub mod rng;
pub mod topology;

pub use error::{Error, Result};

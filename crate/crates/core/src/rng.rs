//! Seeded random streams.
//!
//! Every replica owns one ChaCha key derived from `(seed, replica)`. Each
//! consumer draws from its own stream of that key, so adding draws to one
//! consumer never shifts the numbers another consumer sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Init = 0,
    GameTransitions = 1,
    Schedule = 2,
    Strategy = 3,
    Topology = 4,
}

pub fn stream(seed: u64, replica: u64, which: Stream) -> SimRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&replica.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(which as u64);
    rng
}

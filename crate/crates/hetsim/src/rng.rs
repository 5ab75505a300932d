//! Deterministic random-stream derivation.
//!
//! Every random draw in a run is reproducible from one master seed. Each
//! (drop, purpose) pair gets its own ChaCha stream so that the layout, the
//! channel, and the learners never share state: adding a draw to one stream
//! cannot shift any other, and drops can be simulated on different threads
//! with bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams within one drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Node placement (picos, UEs).
    Layout,
    /// Shadowing fields and fast-fading evolution.
    Channel,
    /// Learner exploration and action sampling.
    Learning,
}

impl Stream {
    fn tag(self) -> u64 {
        match self {
            Stream::Layout => 0x4c41_594f_5554,
            Stream::Channel => 0x4348_414e,
            Stream::Learning => 0x4c45_4152_4e,
        }
    }
}

/// SplitMix64 step; the standard way to stretch one seed into many.
fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    *state = z ^ (z >> 31);
}

/// Derives a sub-seed for (master seed, drop index, stream).
pub fn derive_seed(master: u64, drop: u64, stream: Stream) -> u64 {
    let mut state = master;
    splitmix64(&mut state);
    state ^= drop.wrapping_mul(0xd6e8_feb8_6659_fd93);
    splitmix64(&mut state);
    state ^= stream.tag();
    splitmix64(&mut state);
    state
}

/// Builds the RNG for one (master seed, drop, stream) triple.
pub fn stream_rng(master: u64, drop: u64, stream: Stream) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, drop, stream))
}

//! Seeded random source shared by generators, algorithms and the harness.
//!
//! ChaCha20 is a counter-based stream cipher, so a `u64` seed maps to the
//! same stream on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(seed)
}

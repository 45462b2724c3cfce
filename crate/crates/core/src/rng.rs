//! Seeded generators.
//!
//! Everything random in the crate goes through ChaCha8 so that a seed gives
//! the same stream on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

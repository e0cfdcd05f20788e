//! Per-instance random streams.
//!
//! Every instance draws from its own ChaCha8 stream selected by
//! `(seed, instance index)`, so an instance is reproducible on its own and
//! independent of how instances are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type InstanceRng = ChaCha8Rng;

/// The stream for instance `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

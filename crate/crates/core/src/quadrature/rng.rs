//! Seeded random streams.
//!
//! ChaCha8 is counter based: `(seed, stream)` fully determines the output,
//! so each stratum or work item owns an independent stream and results do
//! not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Name recorded in reports next to the seed.
pub const GENERATOR: &str = "ChaCha8";

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

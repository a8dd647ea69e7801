//! Deterministic per-item random streams.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `stream` under `seed`; item `i` of any generator uses
/// stream `i`, so results do not depend on how work is split across threads.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Stream reserved for per-dataset choices such as label order.
pub(crate) const CONTROL_STREAM: u64 = u64::MAX;

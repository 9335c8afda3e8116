use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for sub-task `stream` of a run seeded with `seed`.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn sub_seed(seed: u64, index: u64) -> u64 {
    stream(seed, index).next_u64()
}

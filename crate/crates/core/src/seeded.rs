//! Reproducible parallel sampling.
//!
//! Trials are cut into fixed-size blocks. Block b draws from a ChaCha8 stream keyed by
//! (seed, b), so results do not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const BLOCK: u64 = 4096;

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `trials` samples in blocks and folds block results in block order.
///
/// `run(rng, n)` performs n trials and returns a partial result; `merge` combines
/// partials and must be associative.
pub fn run_blocks<T, R, M>(trials: u64, seed: u64, run: R, merge: M) -> Option<T>
where
    T: Send,
    R: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let nblocks = trials.div_ceil(BLOCK);
    let parts: Vec<T> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK.min(trials - b * BLOCK);
            run(&mut block_rng(seed, b), n)
        })
        .collect();
    parts.into_iter().reduce(merge)
}

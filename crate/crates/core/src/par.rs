//! Deterministic data-parallel helpers.
//!
//! Work is split into fixed-size chunks whose random streams depend only on
//! `(seed, chunk index)`, so results are identical for [`Exec::Sequential`]
//! and [`Exec::Parallel`] and independent of the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Execution strategy for sampling loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise runs
    /// sequentially.
    #[default]
    Parallel,
}

/// Samples per chunk; each chunk owns one random stream.
pub const CHUNK: usize = 1024;

/// Random stream for chunk `index` of a run seeded by `seed`.
pub fn chunk_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_range<T, F>(exec: Exec, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Runs `f` once per chunk of a `samples`-sized budget. `f` receives the
/// chunk's random stream and the number of samples it owns.
pub fn map_chunks<T, F>(exec: Exec, samples: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync + Send,
{
    let chunks = samples.div_ceil(CHUNK);
    map_range(exec, chunks, |c| {
        let mut rng = chunk_rng(seed, c);
        let len = CHUNK.min(samples - c * CHUNK);
        f(&mut rng, len)
    })
}

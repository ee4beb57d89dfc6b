//! Deterministic data-parallel scans over index ranges.
//!
//! Work is cut into fixed-size chunks by index arithmetic, so every merged
//! result (first failing index, counts, per-chunk samples) depends only on the
//! inputs and never on the number of worker threads.

use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Indices per chunk.
pub const CHUNK: u64 = 4096;

/// Run `f` inside a dedicated pool with the given number of threads
/// (0 means the rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(f)
}

fn chunk_range(chunk: u64, count: u64) -> Range<u64> {
    let start = chunk * CHUNK;
    start..(start + CHUNK).min(count)
}

fn chunk_count(count: u64) -> u64 {
    count.div_ceil(CHUNK)
}

/// Least index in `0..count` whose test yields a witness.
///
/// Chunks are processed in waves; the first wave containing a hit decides,
/// and within it the smallest index wins.
pub fn first_hit<W, F>(count: u64, test: F) -> Option<(u64, W)>
where
    W: Send,
    F: Fn(u64) -> Option<W> + Sync,
{
    let chunks = chunk_count(count);
    let wave = (rayon::current_num_threads() as u64 * 4).max(1);
    let mut start = 0;
    while start < chunks {
        let end = (start + wave).min(chunks);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|c| chunk_range(c, count).find_map(|i| test(i).map(|w| (i, w))))
            .min_by_key(|(i, _)| *i);
        if hit.is_some() {
            return hit;
        }
        start = end;
    }
    None
}

/// Apply `f` to every chunk range of `0..count`; results in chunk order.
pub fn map_chunks<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, Range<u64>) -> T + Sync,
{
    (0..chunk_count(count))
        .into_par_iter()
        .map(|c| f(c, chunk_range(c, count)))
        .collect()
}

/// Apply `f` to every index in order-independent fashion; results in index order.
pub fn map_indices<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    map_chunks(count, |_, r| r.map(&f).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}

/// Number of indices satisfying `pred`.
pub fn count_matching<F>(count: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    map_chunks(count, |_, r| r.filter(|&i| pred(i)).count() as u64).into_iter().sum()
}

/// The random stream owned by one chunk of a seeded sampling run.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// First sample (in sample order) whose test yields a witness, where sample
/// `i` is drawn from the stream of its chunk.
pub fn first_sampled_hit<W, F>(samples: u64, seed: u64, test: F) -> Option<(u64, W)>
where
    W: Send,
    F: Fn(&mut ChaCha8Rng) -> Option<W> + Sync,
{
    let chunks = chunk_count(samples);
    let wave = (rayon::current_num_threads() as u64 * 4).max(1);
    let mut start = 0;
    while start < chunks {
        let end = (start + wave).min(chunks);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|c| {
                let mut rng = chunk_rng(seed, c);
                chunk_range(c, samples).find_map(|i| test(&mut rng).map(|w| (i, w)))
            })
            .min_by_key(|(i, _)| *i);
        if hit.is_some() {
            return hit;
        }
        start = end;
    }
    None
}

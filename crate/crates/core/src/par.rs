//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature (default) these fan out over rayon; without it
//! they run as plain iterators. All combining is done in index order so results
//! are identical either way.

#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Sequential reference version of [`map_indexed`], available in both builds.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Sum `f` over blocks of `[1, limit]`; blocks are summed internally in index
/// order and combined in block order, so the result does not depend on the
/// number of threads.
pub fn sum_blocks<F>(limit: u64, block: u64, f: F) -> f64
where
    F: Fn(std::ops::Range<u64>) -> f64 + Sync + Send,
{
    let nblocks = limit.div_ceil(block) as usize;
    let partials = map_indexed(nblocks, |i| {
        let lo = 1 + i as u64 * block;
        let hi = (lo + block - 1).min(limit) + 1;
        f(lo..hi)
    });
    partials.iter().sum()
}

/// Sequential reference version of [`sum_blocks`].
pub fn sum_blocks_seq<F>(limit: u64, block: u64, f: F) -> f64
where
    F: Fn(std::ops::Range<u64>) -> f64,
{
    let nblocks = limit.div_ceil(block) as usize;
    (0..nblocks)
        .map(|i| {
            let lo = 1 + i as u64 * block;
            let hi = (lo + block - 1).min(limit) + 1;
            f(lo..hi)
        })
        .sum()
}

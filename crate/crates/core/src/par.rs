//! Execution policy for data-parallel loops.
//!
//! With the `parallel` feature (default) loops run on the rayon pool; without it
//! every policy degrades to the sequential path. Reductions always sum
//! fixed-size chunks in index order so both paths return bit-identical results.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum number of loop items handed to one rayon task.
#[cfg(feature = "parallel")]
const MIN_TASK_LEN: usize = 1 << 12;
/// Chunk size for deterministic reductions.
const SUM_CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    /// Rayon data-parallel loops; identical to `Sequential` when the
    /// `parallel` feature is disabled.
    Parallel,
}

impl Default for ExecPolicy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecPolicy::Parallel
        } else {
            ExecPolicy::Sequential
        }
    }
}

impl ExecPolicy {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecPolicy::Parallel
    }
}

pub(crate) fn for_each_index<F>(policy: ExecPolicy, count: usize, f: F)
where
    F: Fn(usize) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() && count >= 2 * MIN_TASK_LEN {
        (0..count)
            .into_par_iter()
            .with_min_len(MIN_TASK_LEN)
            .for_each(f);
        return;
    }
    let _ = policy;
    (0..count).for_each(f);
}

/// Sums `f` over `0..count` in fixed chunks, combining partials in order.
pub(crate) fn chunked_sum<F>(policy: ExecPolicy, count: usize, f: F) -> f64
where
    F: Fn(Range<usize>) -> f64 + Sync + Send,
{
    let chunks = count.div_ceil(SUM_CHUNK);
    let chunk = |c: usize| {
        let start = c * SUM_CHUNK;
        f(start..(start + SUM_CHUNK).min(count))
    };
    #[cfg(feature = "parallel")]
    if policy.is_parallel() && chunks > 1 {
        let partials: Vec<f64> = (0..chunks).into_par_iter().map(chunk).collect();
        return partials.iter().sum();
    }
    let _ = policy;
    (0..chunks).map(chunk).collect::<Vec<_>>().iter().sum()
}

/// Runs independent jobs, keeping output order.
pub(crate) fn map_collect<T, R, F>(policy: ExecPolicy, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy.is_parallel() {
        return items.into_par_iter().map(f).collect();
    }
    let _ = policy;
    items.into_iter().map(f).collect()
}

//! Execution strategy for the enumeration loops.
//!
//! With the `parallel` feature the loops are split across the rayon pool;
//! without it every strategy runs on the calling thread. Partial sums are
//! plain `u64` additions, so the result never depends on the partitioning.

use std::ops::Range;

/// How an enumeration loop is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy will actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Minimum number of indices handed to one worker.
const CHUNK: u64 = 1 << 12;

/// Sums `f(i)` over `range`, chunk by chunk.
///
/// `f` receives a whole chunk so callers can reuse scratch buffers and
/// incremental state (e.g. running powers) inside it.
pub fn sum_chunks<F>(exec: Exec, range: Range<u64>, f: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync + Send,
{
    let len = range.end.saturating_sub(range.start);
    if len == 0 {
        return 0;
    }
    let chunks = len.div_ceil(CHUNK);
    let chunk_range = |c: u64| {
        let lo = range.start + c * CHUNK;
        lo..(lo + CHUNK).min(range.end)
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..chunks).into_par_iter().map(|c| f(chunk_range(c))).sum();
    }
    let _ = exec;
    (0..chunks).map(|c| f(chunk_range(c))).sum()
}

/// Maps `f` over `items` preserving order.
pub fn map_ordered<T, U, F>(exec: Exec, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitioning_does_not_change_sums() {
        let f = |r: Range<u64>| r.map(|i| i * i % 7).sum::<u64>();
        let range = 3..100_003;
        let seq = sum_chunks(Exec::Sequential, range.clone(), f);
        let par = sum_chunks(Exec::Parallel, range.clone(), f);
        let direct: u64 = range.map(|i| i * i % 7).sum();
        assert_eq!(seq, direct);
        assert_eq!(par, direct);
        assert_eq!(sum_chunks(Exec::Parallel, 5..5, f), 0);
    }

    #[test]
    fn ordered_map_keeps_order() {
        let v: Vec<u32> = (0..1000).collect();
        let out = map_ordered(Exec::Parallel, &v, |x| x * 2);
        assert_eq!(out, v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}

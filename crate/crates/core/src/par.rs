//! Ordered map over work blocks, parallel when the `parallel` feature is on.
//!
//! Work is always split into the same fixed blocks and the per-block results
//! come back in block order, so any reduction done afterwards is
//! independent of the thread count.

use std::ops::RangeInclusive;

/// Block length used by range scans. Fixed so results do not depend on
/// the number of workers.
pub const SCAN_BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run blocks concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Split `range` into consecutive blocks of at most `block` integers, with an
/// extra cut before each value in `cuts` (so checkpoints start new blocks).
pub fn blocks(range: RangeInclusive<u64>, block: u64, cuts: &[u64]) -> Vec<RangeInclusive<u64>> {
    let (lo, hi) = (*range.start(), *range.end());
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut start = lo;
    let mut cut_iter = cuts.iter().copied().filter(|&c| c >= lo && c < hi).peekable();
    while start <= hi {
        let mut end = start.saturating_add(block - 1).min(hi);
        while let Some(&c) = cut_iter.peek() {
            if c < start {
                cut_iter.next();
            } else {
                if c < end {
                    end = c;
                }
                break;
            }
        }
        out.push(start..=end);
        if end == hi {
            break;
        }
        start = end + 1;
    }
    out
}

/// `f` applied to every item, results in input order.
pub fn map_ordered<I, T, F>(exec: Execution, items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec.is_parallel() {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    items.into_iter().map(f).collect()
}

/// Run `job` on a pool with `threads` workers (or the global pool when
/// `threads` is `None`). Without the `parallel` feature this just calls `job`.
pub fn with_threads<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if let Some(t) = threads {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
                return pool.install(job);
            }
        }
    }
    let _ = threads;
    job()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_range_and_respect_cuts() {
        let b = blocks(1..=100, 30, &[10, 50, 100]);
        assert_eq!(b, vec![1..=10, 11..=40, 41..=50, 51..=80, 81..=100]);
        assert_eq!(blocks(5..=4, 10, &[]), Vec::<RangeInclusive<u64>>::new());
        assert_eq!(blocks(3..=3, 10, &[3]), vec![3..=3]);
        let big = blocks(1..=1_000_000, SCAN_BLOCK, &[1000, 10_000, 100_000]);
        let total: u64 = big.iter().map(|r| r.end() - r.start() + 1).sum();
        assert_eq!(total, 1_000_000);
        assert!(big.windows(2).all(|w| *w[0].end() + 1 == *w[1].start()));
        assert!(big.iter().any(|r| *r.end() == 10_000));
    }

    #[test]
    fn ordered_map_matches_sequential() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_ordered(Execution::Sequential, items.clone(), |x| x * x);
        let par = with_threads(Some(4), || map_ordered(Execution::Parallel, items, |x| x * x));
        assert_eq!(seq, par);
    }
}

//! Range partitioning over worker threads (sequential without the `parallel` feature).

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const CHUNK: u64 = 1 << 14;

/// Number of x in [0, n) satisfying `pred`.
pub fn count(n: u64, pred: impl Fn(u64) -> bool + Sync + Send) -> u64 {
    #[cfg(feature = "parallel")]
    {
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let end = ((c + 1) * CHUNK).min(n);
                (c * CHUNK..end).filter(|&x| pred(x)).count() as u64
            })
            .sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).filter(|&x| pred(x)).count() as u64
    }
}

/// Runs `f` on every chunk of [0, n) and folds the per-chunk results with `merge`.
pub fn fold_chunks<T: Send>(
    n: u64,
    f: impl Fn(std::ops::Range<u64>) -> T + Sync + Send,
    identity: impl Fn() -> T + Sync + Send,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> T {
    #[cfg(feature = "parallel")]
    {
        let chunks = n.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| f(c * CHUNK..((c + 1) * CHUNK).min(n)))
            .reduce(&identity, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = identity();
        let mut start = 0;
        while start < n {
            let end = (start + CHUNK).min(n);
            acc = merge(acc, f(start..end));
            start = end;
        }
        acc
    }
}

/// Runs `f` over items in parallel, preserving order of results.
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

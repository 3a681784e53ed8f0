//! Ordered batch execution, parallel with the `std` feature.

use alloc::vec::Vec;

/// Runs `f` on `[start, end)` chunks of `0..n` of size `batch` and returns the
/// results in chunk order.
pub(crate) fn map_batches<T, F>(n: u64, batch: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let chunks = n.div_ceil(batch.max(1));
    let run = |c: u64| {
        let start = c * batch;
        f(start, (start + batch).min(n))
    };
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "std"))]
    {
        (0..chunks).map(run).collect()
    }
}

/// `f` over `items`, in order.
pub(crate) fn map_ordered<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "std"))]
    {
        items.iter().map(f).collect()
    }
}

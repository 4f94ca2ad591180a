//! Order-fixed summation.
//!
//! Index ranges are cut into blocks of [`BLOCK`] consecutive indices. Each
//! block is summed left to right, and block sums are combined by a pairwise
//! tree whose shape depends only on the block count. Whether blocks are
//! evaluated on one thread or many, the floating-point operations are the
//! same, so the result is bit-identical.

use alloc::vec::Vec;

pub const BLOCK: usize = 4096;

/// Pairwise sum with a fixed split at the midpoint.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        len => {
            let mid = len / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// `f(0), …, f(count-1)` in index order, computed in parallel when the
/// `parallel` feature is enabled.
pub fn ordered_map<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Blocked sum of `term(i)` over `0..count`.
///
/// `block` receives a half-open index range and must return the left-to-right
/// sum of its terms; it is given whole blocks so that callers can reuse
/// scratch buffers across a block.
pub fn blocked_sum<F>(count: usize, block: F) -> f64
where
    F: Fn(core::ops::Range<usize>) -> f64 + Sync + Send,
{
    let blocks = count.div_ceil(BLOCK);
    let sums = ordered_map(blocks, |b| block(b * BLOCK..((b + 1) * BLOCK).min(count)));
    tree_sum(&sums)
}

//! Fork-join helper with granularity control.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::counters;

/// Subtrees smaller than this run sequentially.
pub const DEFAULT_GRANULARITY: usize = 256;

static GRANULARITY: AtomicUsize = AtomicUsize::new(DEFAULT_GRANULARITY);

pub fn granularity() -> usize {
    GRANULARITY.load(Ordering::Relaxed)
}

pub fn set_granularity(n: usize) {
    GRANULARITY.store(n.max(1), Ordering::Relaxed);
}

/// Runs both closures, in parallel when `size` reaches the grain and the
/// current rayon pool has more than one worker.
#[inline]
pub(crate) fn fork<A, B, FA, FB>(size: usize, a: FA, b: FB) -> (A, B)
where
    A: Send,
    B: Send,
    FA: FnOnce() -> A + Send,
    FB: FnOnce() -> B + Send,
{
    if size >= granularity() && rayon::current_num_threads() > 1 {
        counters::forked();
        rayon::join(a, b)
    } else {
        (a(), b())
    }
}

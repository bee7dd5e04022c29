//! Operation counters.
//!
//! Each thread bumps its own slot; [`snapshot`] sums every slot ever
//! registered. Only the owning thread writes a slot, so increments are a
//! relaxed load/store pair rather than a read-modify-write. Snapshots taken
//! while other threads are mid-operation are approximate.

use std::ops::Sub;
use std::sync::atomic::{AtomicU64, Ordering::Relaxed};
use std::sync::{Arc, Mutex};

#[derive(Default)]
struct Slot {
    comparisons: AtomicU64,
    allocated: AtomicU64,
    freed: AtomicU64,
    visited: AtomicU64,
    tasks: AtomicU64,
}

static REGISTRY: Mutex<Vec<Arc<Slot>>> = Mutex::new(Vec::new());

// Used when a thread's slot is already torn down (thread-local destructors).
static ORPHAN: Slot = Slot {
    comparisons: AtomicU64::new(0),
    allocated: AtomicU64::new(0),
    freed: AtomicU64::new(0),
    visited: AtomicU64::new(0),
    tasks: AtomicU64::new(0),
};

thread_local! {
    static LOCAL: Arc<Slot> = {
        let slot = Arc::new(Slot::default());
        REGISTRY.lock().unwrap_or_else(|e| e.into_inner()).push(slot.clone());
        slot
    };
}

#[inline]
fn bump(field: fn(&Slot) -> &AtomicU64) {
    if LOCAL
        .try_with(|s| {
            let c = field(s);
            c.store(c.load(Relaxed) + 1, Relaxed);
        })
        .is_err()
    {
        field(&ORPHAN).fetch_add(1, Relaxed);
    }
}

#[inline]
pub(crate) fn compared() {
    bump(|s| &s.comparisons)
}

#[inline]
pub(crate) fn allocated() {
    bump(|s| &s.allocated)
}

#[inline]
pub(crate) fn freed() {
    bump(|s| &s.freed)
}

#[inline]
pub(crate) fn visited() {
    bump(|s| &s.visited)
}

#[inline]
pub(crate) fn forked() {
    bump(|s| &s.tasks)
}

/// Totals across all threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Key comparisons made through [`AugSpec::compare`](crate::AugSpec::compare).
    pub comparisons: u64,
    pub allocated: u64,
    pub freed: u64,
    /// Tree nodes examined by an operation.
    pub visited: u64,
    /// Parallel forks actually spawned.
    pub tasks: u64,
}

impl Counters {
    /// Nodes allocated and not yet freed. Only meaningful on absolute
    /// snapshots or on deltas.
    pub fn live(&self) -> i64 {
        self.allocated as i64 - self.freed as i64
    }
}

impl Sub for Counters {
    type Output = Counters;

    fn sub(self, rhs: Counters) -> Counters {
        Counters {
            comparisons: self.comparisons.wrapping_sub(rhs.comparisons),
            allocated: self.allocated.wrapping_sub(rhs.allocated),
            freed: self.freed.wrapping_sub(rhs.freed),
            visited: self.visited.wrapping_sub(rhs.visited),
            tasks: self.tasks.wrapping_sub(rhs.tasks),
        }
    }
}

pub fn snapshot() -> Counters {
    let registry = REGISTRY.lock().unwrap_or_else(|e| e.into_inner());
    let mut total = Counters::default();
    for slot in registry.iter().map(|s| &**s).chain(std::iter::once(&ORPHAN)) {
        total.comparisons += slot.comparisons.load(Relaxed);
        total.allocated += slot.allocated.load(Relaxed);
        total.freed += slot.freed.load(Relaxed);
        total.visited += slot.visited.load(Relaxed);
        total.tasks += slot.tasks.load(Relaxed);
    }
    total
}

/// Nodes currently alive in the whole process.
pub fn live_nodes() -> i64 {
    snapshot().live()
}

/// Runs `f` and returns its result with the counter delta it produced.
/// Counts from unrelated threads running at the same time leak into the
/// delta.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, Counters) {
    let before = snapshot();
    let r = f();
    (r, snapshot() - before)
}

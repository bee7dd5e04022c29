#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::{Mutex, MutexGuard};

use augmap::{AugMap, Scheme, Sum};

/// Serialises tests that read the process-wide counters.
pub fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

pub type Entries = Vec<(i64, i64)>;
pub type SumMap<B> = AugMap<Sum<i64, i64>, B>;

/// Sorted, deduplicated reference with the same duplicate rule as `build`
/// under `h = keep last`.
pub fn sorted(entries: &[(i64, i64)]) -> Entries {
    let mut m = BTreeMap::new();
    for &(k, v) in entries {
        m.insert(k, v);
    }
    m.into_iter().collect()
}

pub fn from_sorted<B: Scheme>(entries: &Entries) -> SumMap<B> {
    AugMap::from_sorted(entries.clone())
}

pub fn ref_union(a: &Entries, b: &Entries, h: impl Fn(i64, i64) -> i64) -> Entries {
    let mut m: BTreeMap<i64, i64> = a.iter().copied().collect();
    for &(k, v) in b {
        m.entry(k).and_modify(|x| *x = h(*x, v)).or_insert(v);
    }
    m.into_iter().collect()
}

pub fn ref_intersect(a: &Entries, b: &Entries, h: impl Fn(i64, i64) -> i64) -> Entries {
    let bm: BTreeMap<i64, i64> = b.iter().copied().collect();
    a.iter().filter_map(|&(k, v)| bm.get(&k).map(|&w| (k, h(v, w)))).collect()
}

pub fn ref_difference(a: &Entries, b: &Entries) -> Entries {
    let bm: BTreeMap<i64, i64> = b.iter().copied().collect();
    a.iter().copied().filter(|(k, _)| !bm.contains_key(k)).collect()
}

pub fn ref_range(a: &Entries, lo: i64, hi: i64) -> Entries {
    a.iter().copied().filter(|&(k, _)| lo <= k && k <= hi).collect()
}

pub fn log2(x: f64) -> f64 {
    x.log2()
}

//! Map algorithms over raw links, built only on `join` and `expose`.
//!
//! Every function consumes the links it is given. Callers that want to keep
//! an input alive pass a clone of the handle; the algorithms then copy the
//! nodes they change and reuse the nodes nobody else references.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::counters;
use crate::node::{cmp, expose, Link, Node, Shell};
use crate::par::fork;
use crate::scheme::Scheme;

type Tree<S, B> = Arc<Node<S, B>>;

#[inline]
pub(crate) fn join<S: AugSpec, B: Scheme>(l: Link<S, B>, mid: Shell<S, B>, r: Link<S, B>) -> Link<S, B> {
    Some(B::join(l, mid, r))
}

pub(crate) fn split<S: AugSpec, B: Scheme>(t: Link<S, B>, k: &S::Key) -> (Link<S, B>, Option<S::Value>, Link<S, B>) {
    let Some(t) = t else { return (None, None, None) };
    counters::visited();
    let ord = cmp::<S>(k, &t.key);
    let (l, mid, r) = expose(t);
    match ord {
        Ordering::Equal => (l, Some(mid.value().clone()), r),
        Ordering::Less => {
            let (ll, found, lr) = split(l, k);
            (ll, found, join(lr, mid.into_shell(), r))
        }
        Ordering::Greater => {
            let (rl, found, rr) = split(r, k);
            (join(l, mid.into_shell(), rl), found, rr)
        }
    }
}

pub(crate) fn split_last<S: AugSpec, B: Scheme>(t: Tree<S, B>) -> (Link<S, B>, Shell<S, B>) {
    counters::visited();
    let (l, mid, r) = expose(t);
    match r {
        None => (l, mid.into_shell()),
        Some(r) => {
            let (rest, last) = split_last(r);
            (join(l, mid.into_shell(), rest), last)
        }
    }
}

pub(crate) fn join2<S: AugSpec, B: Scheme>(l: Link<S, B>, r: Link<S, B>) -> Link<S, B> {
    match l {
        None => r,
        Some(l) => {
            let (rest, last) = split_last(l);
            join(rest, last, r)
        }
    }
}

/// Keys of both; a key present in both gets `h(value in a, value in b)`.
pub(crate) fn union<S, B, H>(a: Link<S, B>, b: Link<S, B>, h: &H) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
{
    let (a, b) = match (a, b) {
        (None, b) => return b,
        (a, None) => return a,
        (Some(a), Some(b)) => (a, b),
    };
    let grain = a.size.min(b.size);
    let (bl, bmid, br) = expose(b);
    let (al, found, ar) = split(Some(a), bmid.key());
    let mut shell = bmid.into_shell();
    if let Some(av) = found {
        let v = h(&av, shell.value());
        shell.set_value(v);
    }
    let (l, r) = fork(grain, || union(al, bl, h), || union(ar, br, h));
    join(l, shell, r)
}

pub(crate) fn intersect<S, B, H>(a: Link<S, B>, b: Link<S, B>, h: &H) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
{
    let (Some(a), Some(b)) = (a, b) else { return None };
    let grain = a.size.min(b.size);
    let (bl, bmid, br) = expose(b);
    let (al, found, ar) = split(Some(a), bmid.key());
    let (l, r) = fork(grain, || intersect(al, bl, h), || intersect(ar, br, h));
    match found {
        Some(av) => {
            let mut shell = bmid.into_shell();
            let v = h(&av, shell.value());
            shell.set_value(v);
            join(l, shell, r)
        }
        None => join2(l, r),
    }
}

/// Entries of `a` whose keys are absent from `b`.
pub(crate) fn difference<S: AugSpec, B: Scheme>(a: Link<S, B>, b: Link<S, B>) -> Link<S, B> {
    let (a, b) = match (a, b) {
        (None, _) => return None,
        (a, None) => return a,
        (Some(a), Some(b)) => (a, b),
    };
    let grain = a.size.min(b.size);
    let (bl, bmid, br) = expose(b);
    let (al, _, ar) = split(Some(a), bmid.key());
    drop(bmid);
    let (l, r) = fork(grain, || difference(al, bl), || difference(ar, br));
    join2(l, r)
}

/// `h(old, new)` decides the value when `k` is already present.
pub(crate) fn insert<S, B, H>(t: Link<S, B>, k: S::Key, v: S::Value, h: &H) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    H: Fn(&S::Value, &S::Value) -> S::Value,
{
    let Some(t) = t else { return join(None, Shell::new(k, v), None) };
    counters::visited();
    let ord = cmp::<S>(&k, &t.key);
    let (l, mid, r) = expose(t);
    match ord {
        Ordering::Less => join(insert(l, k, v, h), mid.into_shell(), r),
        Ordering::Greater => join(l, mid.into_shell(), insert(r, k, v, h)),
        Ordering::Equal => {
            let mut shell = mid.into_shell();
            let nv = h(shell.value(), &v);
            shell.set_value(nv);
            join(l, shell, r)
        }
    }
}

pub(crate) fn delete<S: AugSpec, B: Scheme>(t: Link<S, B>, k: &S::Key) -> Link<S, B> {
    let t = t?;
    counters::visited();
    let ord = cmp::<S>(k, &t.key);
    let (l, mid, r) = expose(t);
    match ord {
        Ordering::Less => join(delete(l, k), mid.into_shell(), r),
        Ordering::Greater => join(l, mid.into_shell(), delete(r, k)),
        Ordering::Equal => join2(l, r),
    }
}

/// Entries with key `<= k`.
pub(crate) fn up_to<S: AugSpec, B: Scheme>(t: Link<S, B>, k: &S::Key) -> Link<S, B> {
    let t = t?;
    counters::visited();
    let ord = cmp::<S>(k, &t.key);
    let (l, mid, r) = expose(t);
    match ord {
        Ordering::Less => up_to(l, k),
        Ordering::Equal => join(l, mid.into_shell(), None),
        Ordering::Greater => join(l, mid.into_shell(), up_to(r, k)),
    }
}

/// Entries with key `>= k`.
pub(crate) fn down_to<S: AugSpec, B: Scheme>(t: Link<S, B>, k: &S::Key) -> Link<S, B> {
    let t = t?;
    counters::visited();
    let ord = cmp::<S>(k, &t.key);
    let (l, mid, r) = expose(t);
    match ord {
        Ordering::Greater => down_to(r, k),
        Ordering::Equal => join(None, mid.into_shell(), r),
        Ordering::Less => join(down_to(l, k), mid.into_shell(), r),
    }
}

pub(crate) fn filter<S, B, P>(t: Link<S, B>, pred: &P) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    P: Fn(&S::Key, &S::Value) -> bool + Sync,
{
    let t = t?;
    counters::visited();
    let grain = t.size;
    let (l, mid, r) = expose(t);
    let (l, r) = fork(grain, || filter(l, pred), || filter(r, pred));
    if pred(mid.key(), mid.value()) {
        join(l, mid.into_shell(), r)
    } else {
        join2(l, r)
    }
}

/// Prunes every subtree whose cached augmented value fails `h`.
pub(crate) fn aug_filter<S, B, P>(t: Link<S, B>, h: &P) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    P: Fn(&S::Aug) -> bool + Sync,
{
    let t = t?;
    counters::visited();
    if !h(&t.aug) {
        return None;
    }
    let grain = t.size;
    let (l, mid, r) = expose(t);
    let (l, r) = fork(grain, || aug_filter(l, h), || aug_filter(r, h));
    if h(&S::base(mid.key(), mid.value())) {
        join(l, mid.into_shell(), r)
    } else {
        join2(l, r)
    }
}

/// In-order fold `f(f(L', g(k, v)), R')` evaluated as `f(L', f(g(k, v), R'))`.
pub(crate) fn map_reduce<S, B, R, G, F>(t: Option<&Tree<S, B>>, g: &G, f: &F, id: &R) -> R
where
    S: AugSpec,
    B: Scheme,
    R: Clone + Send + Sync,
    G: Fn(&S::Key, &S::Value) -> R + Sync,
    F: Fn(R, R) -> R + Sync,
{
    let Some(t) = t else { return id.clone() };
    counters::visited();
    let (l, r) = fork(
        t.size,
        || map_reduce(t.left.as_ref(), g, f, id),
        || map_reduce(t.right.as_ref(), g, f, id),
    );
    let mid = g(&t.key, &t.value);
    match (&t.left, &t.right) {
        (None, None) => mid,
        (None, Some(_)) => f(mid, r),
        (Some(_), None) => f(l, mid),
        (Some(_), Some(_)) => f(l, f(mid, r)),
    }
}

/// Sorts stably, folds equal keys left to right with `h`, then builds by
/// midpoint recursion.
pub(crate) fn build<S, B, H>(mut entries: Vec<(S::Key, S::Value)>, h: &H) -> Link<S, B>
where
    S: AugSpec,
    B: Scheme,
    H: Fn(&S::Value, &S::Value) -> S::Value,
{
    if entries.is_empty() {
        return None;
    }
    sort_entries::<S>(&mut entries);
    let mut slots: Vec<Option<(S::Key, S::Value)>> = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        if let Some(Some((lk, lv))) = slots.last_mut() {
            if cmp::<S>(lk, &k) == Ordering::Equal {
                *lv = h(lv, &v);
                continue;
            }
        }
        slots.push(Some((k, v)));
    }
    build_sorted(&mut slots)
}

fn sort_entries<S: AugSpec>(entries: &mut [(S::Key, S::Value)]) {
    use rayon::slice::ParallelSliceMut;
    if rayon::current_num_threads() > 1 && entries.len() >= crate::par::granularity() {
        entries.par_sort_by(|a, b| cmp::<S>(&a.0, &b.0));
    } else {
        entries.sort_by(|a, b| cmp::<S>(&a.0, &b.0));
    }
}

/// Builds from strictly increasing, distinct keys.
pub(crate) fn build_sorted<S: AugSpec, B: Scheme>(slots: &mut [Option<(S::Key, S::Value)>]) -> Link<S, B> {
    if slots.is_empty() {
        return None;
    }
    let n = slots.len();
    let (left, rest) = slots.split_at_mut(n / 2);
    let (mid, right) = rest.split_first_mut().expect("nonempty");
    let (k, v) = mid.take().expect("each slot is taken once");
    let (l, r) = fork(n, || build_sorted(left), || build_sorted(right));
    join(l, Shell::new(k, v), r)
}

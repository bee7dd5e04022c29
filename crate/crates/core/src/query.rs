//! Read-only traversals: navigation, order statistics and augmented-value
//! queries that read cached subtree sums instead of visiting subtrees.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::counters;
use crate::node::{cmp, Node};
use crate::scheme::Scheme;

type Tree<S, B> = Arc<Node<S, B>>;
type Cursor<'a, S, B> = Option<&'a Tree<S, B>>;

pub(crate) fn find<'a, S: AugSpec, B: Scheme>(mut t: Cursor<'a, S, B>, k: &S::Key) -> Option<&'a Node<S, B>> {
    while let Some(n) = t {
        counters::visited();
        match cmp::<S>(k, &n.key) {
            Ordering::Less => t = n.left.as_ref(),
            Ordering::Greater => t = n.right.as_ref(),
            Ordering::Equal => return Some(n),
        }
    }
    None
}

pub(crate) fn first<S: AugSpec, B: Scheme>(mut t: Cursor<'_, S, B>) -> Option<&Node<S, B>> {
    let mut best = None;
    while let Some(n) = t {
        counters::visited();
        best = Some(&**n);
        t = n.left.as_ref();
    }
    best
}

pub(crate) fn last<S: AugSpec, B: Scheme>(mut t: Cursor<'_, S, B>) -> Option<&Node<S, B>> {
    let mut best = None;
    while let Some(n) = t {
        counters::visited();
        best = Some(&**n);
        t = n.right.as_ref();
    }
    best
}

/// Smallest key strictly greater than `k`.
pub(crate) fn next<'a, S: AugSpec, B: Scheme>(mut t: Cursor<'a, S, B>, k: &S::Key) -> Option<&'a Node<S, B>> {
    let mut best = None;
    while let Some(n) = t {
        counters::visited();
        if cmp::<S>(k, &n.key) == Ordering::Less {
            best = Some(&**n);
            t = n.left.as_ref();
        } else {
            t = n.right.as_ref();
        }
    }
    best
}

/// Largest key strictly less than `k`.
pub(crate) fn previous<'a, S: AugSpec, B: Scheme>(mut t: Cursor<'a, S, B>, k: &S::Key) -> Option<&'a Node<S, B>> {
    let mut best = None;
    while let Some(n) = t {
        counters::visited();
        if cmp::<S>(&n.key, k) == Ordering::Less {
            best = Some(&**n);
            t = n.right.as_ref();
        } else {
            t = n.left.as_ref();
        }
    }
    best
}

/// Number of keys strictly less than `k`.
pub(crate) fn rank<S: AugSpec, B: Scheme>(mut t: Cursor<'_, S, B>, k: &S::Key) -> usize {
    let mut below = 0;
    while let Some(n) = t {
        counters::visited();
        match cmp::<S>(k, &n.key) {
            Ordering::Less => t = n.left.as_ref(),
            Ordering::Equal => return below + n.left.as_ref().map_or(0, |l| l.size),
            Ordering::Greater => {
                below += n.left.as_ref().map_or(0, |l| l.size) + 1;
                t = n.right.as_ref();
            }
        }
    }
    below
}

pub(crate) fn select<S: AugSpec, B: Scheme>(mut t: Cursor<'_, S, B>, mut i: usize) -> Option<&Node<S, B>> {
    while let Some(n) = t {
        counters::visited();
        let ls = n.left.as_ref().map_or(0, |l| l.size);
        match i.cmp(&ls) {
            Ordering::Less => t = n.left.as_ref(),
            Ordering::Equal => return Some(n),
            Ordering::Greater => {
                i -= ls + 1;
                t = n.right.as_ref();
            }
        }
    }
    None
}

/// Accumulator that never combines with the identity, so a combine whose
/// identity only holds on reachable values is still evaluated correctly.
struct Acc<A>(Option<A>);

impl<A> Acc<A> {
    fn push_right(&mut self, x: A, f: impl Fn(&A, &A) -> A) {
        self.0 = Some(match self.0.take() {
            None => x,
            Some(a) => f(&a, &x),
        });
    }

    fn push_left(&mut self, x: A, f: impl Fn(&A, &A) -> A) {
        self.0 = Some(match self.0.take() {
            None => x,
            Some(a) => f(&x, &a),
        });
    }
}

/// Augmented value of the entries with key `<= k` (`inclusive`) or `< k`.
pub(crate) fn aug_left<S: AugSpec, B: Scheme>(t: Cursor<'_, S, B>, k: &S::Key, inclusive: bool) -> S::Aug {
    let mut acc = Acc(None);
    aug_left_into(t, k, inclusive, &mut acc, &|n| n.aug.clone(), &|n| n.base(), &S::combine);
    acc.0.unwrap_or_else(S::identity)
}

/// Augmented value of the entries with key `>= k` (`inclusive`) or `> k`.
pub(crate) fn aug_right<S: AugSpec, B: Scheme>(t: Cursor<'_, S, B>, k: &S::Key, inclusive: bool) -> S::Aug {
    let mut acc = Acc(None);
    aug_right_into(t, k, inclusive, &mut acc, &|n| n.aug.clone(), &|n| n.base(), &S::combine);
    acc.0.unwrap_or_else(S::identity)
}

// `subtree` projects a whole cached subtree, `entry` a single node's entry.
fn aug_left_into<S: AugSpec, B: Scheme, R>(
    mut t: Cursor<'_, S, B>,
    k: &S::Key,
    inclusive: bool,
    acc: &mut Acc<R>,
    subtree: &impl Fn(&Node<S, B>) -> R,
    entry: &impl Fn(&Node<S, B>) -> R,
    f: &impl Fn(&R, &R) -> R,
) {
    while let Some(n) = t {
        counters::visited();
        let ord = cmp::<S>(k, &n.key);
        let goes_left = ord == Ordering::Less || (!inclusive && ord == Ordering::Equal);
        if goes_left {
            t = n.left.as_ref();
        } else {
            if let Some(l) = &n.left {
                acc.push_right(subtree(l), f);
            }
            acc.push_right(entry(n), f);
            if ord == Ordering::Equal {
                return;
            }
            t = n.right.as_ref();
        }
    }
}

fn aug_right_into<S: AugSpec, B: Scheme, R>(
    mut t: Cursor<'_, S, B>,
    k: &S::Key,
    inclusive: bool,
    acc: &mut Acc<R>,
    subtree: &impl Fn(&Node<S, B>) -> R,
    entry: &impl Fn(&Node<S, B>) -> R,
    f: &impl Fn(&R, &R) -> R,
) {
    while let Some(n) = t {
        counters::visited();
        let ord = cmp::<S>(k, &n.key);
        let goes_right = ord == Ordering::Greater || (!inclusive && ord == Ordering::Equal);
        if goes_right {
            t = n.right.as_ref();
        } else {
            if let Some(r) = &n.right {
                acc.push_left(subtree(r), f);
            }
            acc.push_left(entry(n), f);
            if ord == Ordering::Equal {
                return;
            }
            t = n.left.as_ref();
        }
    }
}

/// Projection of the entries with `lo <= key <= hi`, combining subtree
/// projections left to right. Returns `None` for an empty range.
pub(crate) fn project_range<S: AugSpec, B: Scheme, R>(
    mut t: Cursor<'_, S, B>,
    lo: &S::Key,
    hi: &S::Key,
    subtree: &impl Fn(&Node<S, B>) -> R,
    entry: &impl Fn(&Node<S, B>) -> R,
    f: &impl Fn(&R, &R) -> R,
) -> Option<R> {
    while let Some(n) = t {
        counters::visited();
        if cmp::<S>(hi, &n.key) == Ordering::Less {
            t = n.left.as_ref();
        } else if cmp::<S>(lo, &n.key) == Ordering::Greater {
            t = n.right.as_ref();
        } else {
            let mut left = Acc(None);
            aug_right_into(n.left.as_ref(), lo, true, &mut left, subtree, entry, f);
            let mut right = Acc(None);
            aug_left_into(n.right.as_ref(), hi, true, &mut right, subtree, entry, f);
            let mut acc = left;
            acc.push_right(entry(n), f);
            if let Some(r) = right.0 {
                acc.push_right(r, f);
            }
            return acc.0;
        }
    }
    None
}

pub(crate) fn aug_range<S: AugSpec, B: Scheme>(t: Cursor<'_, S, B>, lo: &S::Key, hi: &S::Key) -> S::Aug {
    project_range(t, lo, hi, &|n| n.aug.clone(), &|n| n.base(), &S::combine).unwrap_or_else(S::identity)
}

/// Descends towards an entry whose base value satisfies `pred`, preferring
/// the leftmost candidate.
pub(crate) fn aug_find<'a, S, B, P>(mut t: Cursor<'a, S, B>, pred: &P) -> Option<&'a Node<S, B>>
where
    S: AugSpec,
    B: Scheme,
    P: Fn(&S::Aug) -> bool,
{
    match t {
        Some(n) if pred(&n.aug) => {}
        _ => return None,
    }
    while let Some(n) = t {
        counters::visited();
        if let Some(l) = n.left.as_ref().filter(|l| pred(&l.aug)) {
            t = Some(l);
        } else if pred(&n.base()) {
            return Some(n);
        } else {
            t = n.right.as_ref().filter(|r| pred(&r.aug));
        }
    }
    None
}

/// Calls `visit` on every entry with `lo <= key <= hi`, in key order.
pub(crate) fn for_each_in_range<'a, S: AugSpec, B: Scheme>(
    t: Cursor<'a, S, B>,
    lo: &S::Key,
    hi: &S::Key,
    visit: &mut impl FnMut(&'a S::Key, &'a S::Value),
) {
    let Some(n) = t else { return };
    counters::visited();
    let above_lo = cmp::<S>(lo, &n.key) != Ordering::Greater;
    let below_hi = cmp::<S>(&n.key, hi) != Ordering::Greater;
    if above_lo {
        for_each_in_range(n.left.as_ref(), lo, hi, visit);
    }
    if above_lo && below_hi {
        visit(&n.key, &n.value);
    }
    if below_hi {
        for_each_in_range(n.right.as_ref(), lo, hi, visit);
    }
}

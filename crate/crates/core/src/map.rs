use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::check::{self, TreeShape};
use crate::error::{InvariantViolation, MapError};
use crate::kernel;
use crate::node::{self, Link, Node, Shell};
use crate::query;
use crate::scheme::{Scheme, WeightBalanced};

/// A persistent augmented ordered map.
///
/// Cloning a map is O(1) and shares every node. No operation changes a map
/// that another handle can observe: methods taking `&self` return new maps
/// that share structure with their inputs, and the `*_mut`/`into_*` variants
/// only update nodes in place when this handle is their sole owner.
pub struct AugMap<S: AugSpec, B: Scheme = WeightBalanced> {
    root: Link<S, B>,
    _spec: PhantomData<fn() -> S>,
}

/// Result of [`AugMap::split`].
pub struct Split<S: AugSpec, B: Scheme = WeightBalanced> {
    pub less: AugMap<S, B>,
    pub found: Option<S::Value>,
    pub greater: AugMap<S, B>,
}

/// Root decomposition returned by [`AugMap::expose`].
pub struct Exposed<S: AugSpec, B: Scheme = WeightBalanced> {
    pub left: AugMap<S, B>,
    pub key: S::Key,
    pub value: S::Value,
    pub right: AugMap<S, B>,
}

fn keep_new<V: Clone>(_: &V, new: &V) -> V {
    new.clone()
}

impl<S: AugSpec, B: Scheme> Clone for AugMap<S, B> {
    fn clone(&self) -> Self {
        AugMap::from_link(self.root.clone())
    }
}

impl<S: AugSpec, B: Scheme> Default for AugMap<S, B> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: AugSpec, B: Scheme> AugMap<S, B> {
    fn from_link(root: Link<S, B>) -> Self {
        AugMap { root, _spec: PhantomData }
    }

    pub fn new() -> Self {
        Self::from_link(None)
    }

    pub fn singleton(key: S::Key, value: S::Value) -> Self {
        Self::from_link(kernel::join(None, Shell::new(key, value), None))
    }

    /// Builds from unsorted entries. Values of duplicate keys are folded
    /// left to right, in input order, with `h(accumulated, next)`.
    pub fn build<H>(entries: Vec<(S::Key, S::Value)>, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value,
    {
        Self::from_link(kernel::build(entries, &h))
    }

    /// Builds from entries whose keys are already strictly increasing.
    pub fn from_sorted(entries: Vec<(S::Key, S::Value)>) -> Self {
        let mut slots: Vec<_> = entries.into_iter().map(Some).collect();
        Self::from_link(kernel::build_sorted(&mut slots))
    }

    pub fn len(&self) -> usize {
        node::size(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<&Arc<Node<S, B>>> {
        self.root.as_ref()
    }

    /// Whether both handles refer to the same root node.
    pub fn ptr_eq(&self, other: &Self) -> bool {
        match (&self.root, &other.root) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// Augmented value of the whole map, read from the root cache.
    pub fn aug_val(&self) -> S::Aug {
        self.root.as_ref().map_or_else(S::identity, |n| n.aug.clone())
    }

    pub fn expose(&self) -> Result<Exposed<S, B>, MapError> {
        let n = self.root.as_ref().ok_or(MapError::Empty)?;
        Ok(Exposed {
            left: Self::from_link(n.left.clone()),
            key: n.key.clone(),
            value: n.value.clone(),
            right: Self::from_link(n.right.clone()),
        })
    }

    /// Concatenates `left`, `(key, value)` and `right`. Every key of `left`
    /// must be below `key` and every key of `right` above it.
    pub fn join(left: &Self, key: S::Key, value: S::Value, right: &Self) -> Self {
        Self::from_link(kernel::join(left.root.clone(), Shell::new(key, value), right.root.clone()))
    }

    /// Concatenates two maps whose key ranges do not overlap.
    pub fn join2(left: &Self, right: &Self) -> Self {
        Self::from_link(kernel::join2(left.root.clone(), right.root.clone()))
    }

    pub fn split(&self, key: &S::Key) -> Split<S, B> {
        let (l, found, r) = kernel::split(self.root.clone(), key);
        Split { less: Self::from_link(l), found, greater: Self::from_link(r) }
    }

    /// Removes the maximum entry, returning the rest and that entry.
    pub fn split_last(&self) -> Result<(Self, S::Key, S::Value), MapError> {
        let root = self.root.clone().ok_or(MapError::Empty)?;
        let (rest, last) = kernel::split_last(root);
        let (k, v) = last.into_entry();
        Ok((Self::from_link(rest), k, v))
    }

    /// Union; a key in both maps gets `h(value in self, value in other)`.
    pub fn union<H>(&self, other: &Self, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
    {
        Self::from_link(kernel::union(self.root.clone(), other.root.clone(), &h))
    }

    pub fn into_union<H>(self, other: Self, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
    {
        Self::from_link(kernel::union(self.root, other.root, &h))
    }

    /// Intersection; values are combined as `h(value in self, value in other)`.
    pub fn intersect<H>(&self, other: &Self, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
    {
        Self::from_link(kernel::intersect(self.root.clone(), other.root.clone(), &h))
    }

    /// Entries of `self` whose keys do not occur in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        Self::from_link(kernel::difference(self.root.clone(), other.root.clone()))
    }

    /// Inserts, combining with `h(old, new)` when the key is present.
    pub fn insert_with<H>(&self, key: S::Key, value: S::Value, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value,
    {
        Self::from_link(kernel::insert(self.root.clone(), key, value, &h))
    }

    /// Inserts, replacing any existing value.
    pub fn insert(&self, key: S::Key, value: S::Value) -> Self {
        self.insert_with(key, value, keep_new)
    }

    pub fn insert_mut_with<H>(&mut self, key: S::Key, value: S::Value, h: H)
    where
        H: Fn(&S::Value, &S::Value) -> S::Value,
    {
        self.root = kernel::insert(self.root.take(), key, value, &h);
    }

    pub fn insert_mut(&mut self, key: S::Key, value: S::Value) {
        self.insert_mut_with(key, value, keep_new)
    }

    pub fn delete(&self, key: &S::Key) -> Self {
        Self::from_link(kernel::delete(self.root.clone(), key))
    }

    pub fn delete_mut(&mut self, key: &S::Key) {
        self.root = kernel::delete(self.root.take(), key);
    }

    /// Builds `entries` (folding duplicates with `h`) and unions the result
    /// in, so `h(old, new)` resolves keys already present.
    pub fn multi_insert<H>(&self, entries: Vec<(S::Key, S::Value)>, h: H) -> Self
    where
        H: Fn(&S::Value, &S::Value) -> S::Value + Sync,
    {
        let fresh = kernel::build(entries, &h);
        Self::from_link(kernel::union(self.root.clone(), fresh, &h))
    }

    pub fn find(&self, key: &S::Key) -> Option<&S::Value> {
        query::find(self.root.as_ref(), key).map(|n| &n.value)
    }

    pub fn contains_key(&self, key: &S::Key) -> bool {
        self.find(key).is_some()
    }

    pub fn first(&self) -> Option<(&S::Key, &S::Value)> {
        query::first(self.root.as_ref()).map(|n| (&n.key, &n.value))
    }

    pub fn last(&self) -> Option<(&S::Key, &S::Value)> {
        query::last(self.root.as_ref()).map(|n| (&n.key, &n.value))
    }

    /// Entry with the smallest key strictly greater than `key`.
    pub fn next(&self, key: &S::Key) -> Option<(&S::Key, &S::Value)> {
        query::next(self.root.as_ref(), key).map(|n| (&n.key, &n.value))
    }

    /// Entry with the largest key strictly less than `key`.
    pub fn previous(&self, key: &S::Key) -> Option<(&S::Key, &S::Value)> {
        query::previous(self.root.as_ref(), key).map(|n| (&n.key, &n.value))
    }

    /// Number of keys strictly less than `key`.
    pub fn rank(&self, key: &S::Key) -> usize {
        query::rank(self.root.as_ref(), key)
    }

    /// The entry at zero-based position `i` in key order.
    pub fn select(&self, i: usize) -> Result<(&S::Key, &S::Value), MapError> {
        query::select(self.root.as_ref(), i)
            .map(|n| (&n.key, &n.value))
            .ok_or(MapError::IndexOutOfRange { index: i, len: self.len() })
    }

    /// Entries with key `<= key`.
    pub fn up_to(&self, key: &S::Key) -> Self {
        Self::from_link(kernel::up_to(self.root.clone(), key))
    }

    /// Entries with key `>= key`.
    pub fn down_to(&self, key: &S::Key) -> Self {
        Self::from_link(kernel::down_to(self.root.clone(), key))
    }

    /// Entries with `lo <= key <= hi`.
    pub fn range(&self, lo: &S::Key, hi: &S::Key) -> Self {
        Self::from_link(kernel::down_to(kernel::up_to(self.root.clone(), hi), lo))
    }

    /// Visits entries with `lo <= key <= hi` in key order without building
    /// a new tree.
    pub fn for_each_in_range<'a>(&'a self, lo: &S::Key, hi: &S::Key, mut visit: impl FnMut(&'a S::Key, &'a S::Value)) {
        query::for_each_in_range(self.root.as_ref(), lo, hi, &mut visit)
    }

    pub fn filter<P>(&self, pred: P) -> Self
    where
        P: Fn(&S::Key, &S::Value) -> bool + Sync,
    {
        Self::from_link(kernel::filter(self.root.clone(), &pred))
    }

    pub fn into_filter<P>(self, pred: P) -> Self
    where
        P: Fn(&S::Key, &S::Value) -> bool + Sync,
    {
        Self::from_link(kernel::filter(self.root, &pred))
    }

    /// Folds `g` over the entries in key order with the associative `f`,
    /// whose identity is `identity`. `f` need not be commutative.
    pub fn map_reduce<R, G, F>(&self, g: G, f: F, identity: R) -> R
    where
        R: Clone + Send + Sync,
        G: Fn(&S::Key, &S::Value) -> R + Sync,
        F: Fn(R, R) -> R + Sync,
    {
        kernel::map_reduce(self.root.as_ref(), &g, &f, &identity)
    }

    /// Augmented value of entries with key `<= key`.
    pub fn aug_left(&self, key: &S::Key) -> S::Aug {
        query::aug_left(self.root.as_ref(), key, true)
    }

    /// Augmented value of entries with key `< key`.
    pub fn aug_left_excl(&self, key: &S::Key) -> S::Aug {
        query::aug_left(self.root.as_ref(), key, false)
    }

    /// Augmented value of entries with key `>= key`.
    pub fn aug_right(&self, key: &S::Key) -> S::Aug {
        query::aug_right(self.root.as_ref(), key, true)
    }

    /// Augmented value of entries with key `> key`.
    pub fn aug_right_excl(&self, key: &S::Key) -> S::Aug {
        query::aug_right(self.root.as_ref(), key, false)
    }

    /// Augmented value of entries with `lo <= key <= hi`.
    pub fn aug_range(&self, lo: &S::Key, hi: &S::Key) -> S::Aug {
        query::aug_range(self.root.as_ref(), lo, hi)
    }

    /// Keeps the entries whose base value satisfies `h`, skipping every
    /// subtree whose cached value fails it.
    ///
    /// Requires `h(a) || h(b) == h(combine(a, b))` for all `a`, `b`; the
    /// output is unspecified otherwise.
    pub fn aug_filter<P>(&self, h: P) -> Self
    where
        P: Fn(&S::Aug) -> bool + Sync,
    {
        let out = Self::from_link(kernel::aug_filter(self.root.clone(), &h));
        #[cfg(debug_assertions)]
        if self.len() <= 64 {
            let mut expected = self.iter().filter(|(k, v)| h(&S::base(k, v))).map(|(k, _)| k);
            let agrees = out.keys().all(|k| expected.next().is_some_and(|e| S::compare(e, k).is_eq()))
                && expected.next().is_none();
            debug_assert!(agrees, "aug_filter predicate does not distribute over combine");
        }
        out
    }

    /// `g(aug_range(lo, hi))` computed by applying `g` only to cached
    /// subtree values on the search paths and folding with `f`.
    ///
    /// Requires `f(g(a), g(b)) == g(combine(a, b))`.
    pub fn aug_project<R, G, F>(&self, g: G, f: F, lo: &S::Key, hi: &S::Key) -> R
    where
        G: Fn(&S::Aug) -> R,
        F: Fn(&R, &R) -> R,
    {
        query::project_range(self.root.as_ref(), lo, hi, &|n| g(&n.aug), &|n| g(&n.base()), &f)
            .unwrap_or_else(|| g(&S::identity()))
    }

    /// Like [`aug_project`](Self::aug_project), with `entry` standing in for
    /// `g(base(k, v))` on single entries. Lets callers avoid materialising
    /// a base value.
    pub fn aug_project_with<R, E, G, F>(&self, entry: E, g: G, f: F, lo: &S::Key, hi: &S::Key) -> R
    where
        E: Fn(&S::Key, &S::Value) -> R,
        G: Fn(&S::Aug) -> R,
        F: Fn(&R, &R) -> R,
    {
        query::project_range(self.root.as_ref(), lo, hi, &|n| g(&n.aug), &|n| entry(&n.key, &n.value), &f)
            .unwrap_or_else(|| g(&S::identity()))
    }

    /// Finds an entry whose base value satisfies `pred` by descending only
    /// into subtrees whose cached value satisfies it, preferring smaller
    /// keys.
    pub fn aug_find<P>(&self, pred: P) -> Option<(&S::Key, &S::Value)>
    where
        P: Fn(&S::Aug) -> bool,
    {
        query::aug_find(self.root.as_ref(), &pred).map(|n| (&n.key, &n.value))
    }

    pub fn iter(&self) -> Iter<'_, S, B> {
        let mut it = Iter { stack: Vec::new() };
        it.push_left(self.root.as_ref());
        it
    }

    pub fn keys(&self) -> impl Iterator<Item = &S::Key> {
        self.iter().map(|(k, _)| k)
    }

    pub fn to_vec(&self) -> Vec<(S::Key, S::Value)> {
        self.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    /// Validates order, sizes, balance and every cached augmented value.
    pub fn check_invariants(&self) -> Result<TreeShape, InvariantViolation>
    where
        S::Key: fmt::Debug,
        S::Aug: PartialEq + fmt::Debug,
    {
        check::validate(self.root.as_ref())
    }
}

impl<S: AugSpec, B: Scheme> fmt::Debug for AugMap<S, B>
where
    S::Key: fmt::Debug,
    S::Value: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

impl<S: AugSpec, B: Scheme> FromIterator<(S::Key, S::Value)> for AugMap<S, B> {
    /// Later duplicates replace earlier ones.
    fn from_iter<I: IntoIterator<Item = (S::Key, S::Value)>>(iter: I) -> Self {
        Self::build(iter.into_iter().collect(), keep_new)
    }
}

impl<'a, S: AugSpec, B: Scheme> IntoIterator for &'a AugMap<S, B> {
    type Item = (&'a S::Key, &'a S::Value);
    type IntoIter = Iter<'a, S, B>;

    fn into_iter(self) -> Iter<'a, S, B> {
        self.iter()
    }
}

/// In-order iterator.
pub struct Iter<'a, S: AugSpec, B: Scheme> {
    stack: Vec<&'a Node<S, B>>,
}

impl<'a, S: AugSpec, B: Scheme> Iter<'a, S, B> {
    fn push_left(&mut self, mut t: Option<&'a Arc<Node<S, B>>>) {
        while let Some(n) = t {
            self.stack.push(n);
            t = n.left.as_ref();
        }
    }
}

impl<'a, S: AugSpec, B: Scheme> Iterator for Iter<'a, S, B> {
    type Item = (&'a S::Key, &'a S::Value);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.stack.pop()?;
        self.push_left(n.right.as_ref());
        Some((&n.key, &n.value))
    }
}

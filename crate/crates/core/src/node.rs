//! Tree nodes, path copying and the node-level building blocks every
//! algorithm is written in terms of.
//!
//! Nodes are shared through `Arc`, whose strong count is the node's
//! reference count. A node is immutable once it is reachable from more than
//! one owner; when an algorithm holds the only reference it updates the node
//! in place instead of copying it.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::counters;
use crate::scheme::Scheme;

/// A possibly empty subtree.
pub type Link<S, B> = Option<Arc<Node<S, B>>>;

pub struct Node<S: AugSpec, B: Scheme> {
    pub(crate) key: S::Key,
    pub(crate) value: S::Value,
    pub(crate) left: Link<S, B>,
    pub(crate) right: Link<S, B>,
    pub(crate) size: usize,
    pub(crate) aug: S::Aug,
    pub(crate) balance: B::Data,
}

impl<S: AugSpec, B: Scheme> Node<S, B> {
    fn leaf(key: S::Key, value: S::Value, balance: B::Data) -> Self {
        counters::allocated();
        let aug = S::base(&key, &value);
        Node { key, value, left: None, right: None, size: 1, aug, balance }
    }

    pub fn key(&self) -> &S::Key {
        &self.key
    }

    pub fn value(&self) -> &S::Value {
        &self.value
    }

    pub fn left(&self) -> Option<&Arc<Node<S, B>>> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Arc<Node<S, B>>> {
        self.right.as_ref()
    }

    /// Number of entries in this subtree.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Cached augmented value of this subtree.
    pub fn aug(&self) -> &S::Aug {
        &self.aug
    }

    pub fn balance(&self) -> B::Data {
        self.balance
    }

    pub(crate) fn base(&self) -> S::Aug {
        S::base(&self.key, &self.value)
    }
}

impl<S: AugSpec, B: Scheme> Clone for Node<S, B> {
    fn clone(&self) -> Self {
        counters::allocated();
        Node {
            key: self.key.clone(),
            value: self.value.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            size: self.size,
            aug: self.aug.clone(),
            balance: self.balance,
        }
    }
}

impl<S: AugSpec, B: Scheme> Drop for Node<S, B> {
    fn drop(&mut self) {
        counters::freed();
    }
}

impl<S: AugSpec, B: Scheme> fmt::Debug for Node<S, B>
where
    S::Key: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Node")
            .field("key", &self.key)
            .field("size", &self.size)
            .field("left", &self.left)
            .field("right", &self.right)
            .finish()
    }
}

#[inline]
pub fn size<S: AugSpec, B: Scheme>(t: &Link<S, B>) -> usize {
    t.as_ref().map_or(0, |n| n.size)
}

/// Counted key comparison.
#[inline]
pub(crate) fn cmp<S: AugSpec>(a: &S::Key, b: &S::Key) -> Ordering {
    counters::compared();
    S::compare(a, b)
}

/// Returns `t` itself when the caller holds the only reference, otherwise a
/// fresh copy that shares `t`'s children. The caller's reference to the
/// original is released either way.
pub fn copy_if_needed<S: AugSpec, B: Scheme>(mut t: Arc<Node<S, B>>) -> Arc<Node<S, B>> {
    Arc::make_mut(&mut t);
    t
}

/// A uniquely owned node with no children, ready to be placed between two
/// subtrees. Its size and augmented value are recomputed when it is linked.
pub struct Shell<S: AugSpec, B: Scheme>(Arc<Node<S, B>>);

impl<S: AugSpec, B: Scheme> Shell<S, B> {
    pub fn new(key: S::Key, value: S::Value) -> Self {
        let balance = B::data_for(&key);
        Shell(Arc::new(Node::leaf(key, value, balance)))
    }

    pub fn key(&self) -> &S::Key {
        &self.0.key
    }

    pub fn value(&self) -> &S::Value {
        &self.0.value
    }

    pub fn balance(&self) -> B::Data {
        self.0.balance
    }

    pub fn set_value(&mut self, value: S::Value) {
        self.node_mut().value = value;
    }

    pub fn into_entry(self) -> (S::Key, S::Value) {
        (self.0.key.clone(), self.0.value.clone())
    }

    fn node_mut(&mut self) -> &mut Node<S, B> {
        Arc::get_mut(&mut self.0).expect("shell is uniquely owned")
    }
}

/// The root entry of an exposed tree. A shared root is only copied when it
/// is turned into a [`Shell`] for reuse.
pub(crate) enum Mid<S: AugSpec, B: Scheme> {
    Unique(Shell<S, B>),
    Shared(Arc<Node<S, B>>),
}

impl<S: AugSpec, B: Scheme> Mid<S, B> {
    #[inline]
    pub(crate) fn key(&self) -> &S::Key {
        match self {
            Mid::Unique(s) => s.key(),
            Mid::Shared(n) => &n.key,
        }
    }

    #[inline]
    pub(crate) fn value(&self) -> &S::Value {
        match self {
            Mid::Unique(s) => s.value(),
            Mid::Shared(n) => &n.value,
        }
    }

    pub(crate) fn into_shell(self) -> Shell<S, B> {
        match self {
            Mid::Unique(s) => s,
            Mid::Shared(n) => {
                let leaf = Node::leaf(n.key.clone(), n.value.clone(), n.balance);
                Shell(Arc::new(leaf))
            }
        }
    }
}

/// Decomposes a root into `(left, entry, right)` without copying anything:
/// a uniquely owned root hands over its children, a shared root lends
/// references to them.
#[inline]
pub(crate) fn expose<S: AugSpec, B: Scheme>(mut t: Arc<Node<S, B>>) -> (Link<S, B>, Mid<S, B>, Link<S, B>) {
    if let Some(n) = Arc::get_mut(&mut t) {
        let l = n.left.take();
        let r = n.right.take();
        return (l, Mid::Unique(Shell(t)), r);
    }
    let l = t.left.clone();
    let r = t.right.clone();
    (l, Mid::Shared(t), r)
}

/// Links `left`, the shell and `right` without any rebalancing, computing
/// size and augmented value from the children's caches.
pub fn make_node<S: AugSpec, B: Scheme>(left: Link<S, B>, shell: Shell<S, B>, right: Link<S, B>) -> Arc<Node<S, B>> {
    let Shell(mut t) = shell;
    let n = Arc::get_mut(&mut t).expect("shell is uniquely owned");
    debug_assert!(left.as_ref().is_none_or(|l| S::compare(&l.key, &n.key) == Ordering::Less));
    debug_assert!(right.as_ref().is_none_or(|r| S::compare(&n.key, &r.key) == Ordering::Less));
    n.size = size(&left) + size(&right) + 1;
    let base = S::base(&n.key, &n.value);
    n.aug = match (&left, &right) {
        (None, None) => base,
        (Some(l), None) => S::combine(&l.aug, &base),
        (None, Some(r)) => S::combine(&base, &r.aug),
        (Some(l), Some(r)) => S::combine(&l.aug, &S::combine(&base, &r.aug)),
    };
    n.left = left;
    n.right = right;
    t
}

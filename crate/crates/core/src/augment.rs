//! Augmentation specifications.
//!
//! An augmented map type is fixed by a key type with a strict total order, a
//! value type, and an augmented value type together with a base function
//! `g: K x V -> A`, an associative combine function `f: A x A -> A` and its
//! identity `I`. Every subtree caches `f` folded over `g` of its entries.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::Add;

/// The type-level description of an augmented map.
///
/// Implementations are usually zero-sized marker types. `combine` must be
/// associative and `identity` must be a two-sided identity for it; the tree
/// never checks either law.
pub trait AugSpec: Send + Sync + 'static {
    type Key: Clone + Hash + Send + Sync + 'static;
    type Value: Clone + Send + Sync + 'static;
    type Aug: Clone + Send + Sync + 'static;

    /// Strict total order on keys.
    fn compare(a: &Self::Key, b: &Self::Key) -> Ordering;

    /// The augmented value of a single entry.
    fn base(key: &Self::Key, value: &Self::Value) -> Self::Aug;

    fn combine(a: &Self::Aug, b: &Self::Aug) -> Self::Aug;

    fn identity() -> Self::Aug;
}

macro_rules! marker {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        pub struct $name<K, V>(PhantomData<fn() -> (K, V)>);

        impl<K, V> fmt::Debug for $name<K, V> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(stringify!($name))
            }
        }
    };
}

marker!(
    /// Plain ordered map: the augmented value is `()`.
    Plain
);
marker!(
    /// Sum of values, identity `V::default()`.
    Sum
);
marker!(
    /// Maximum of values. `None` is the identity and sorts below every value.
    Max
);

impl<K, V> AugSpec for Plain<K, V>
where
    K: Ord + Clone + Hash + Send + Sync + 'static,
    V: Clone + Send + Sync + 'static,
{
    type Key = K;
    type Value = V;
    type Aug = ();

    fn compare(a: &K, b: &K) -> Ordering {
        a.cmp(b)
    }
    fn base(_: &K, _: &V) {}
    fn combine(_: &(), _: &()) {}
    fn identity() {}
}

impl<K, V> AugSpec for Sum<K, V>
where
    K: Ord + Clone + Hash + Send + Sync + 'static,
    V: Clone + Default + Add<Output = V> + Send + Sync + 'static,
{
    type Key = K;
    type Value = V;
    type Aug = V;

    fn compare(a: &K, b: &K) -> Ordering {
        a.cmp(b)
    }
    fn base(_: &K, v: &V) -> V {
        v.clone()
    }
    fn combine(a: &V, b: &V) -> V {
        a.clone() + b.clone()
    }
    fn identity() -> V {
        V::default()
    }
}

impl<K, V> AugSpec for Max<K, V>
where
    K: Ord + Clone + Hash + Send + Sync + 'static,
    V: Ord + Clone + Send + Sync + 'static,
{
    type Key = K;
    type Value = V;
    type Aug = Option<V>;

    fn compare(a: &K, b: &K) -> Ordering {
        a.cmp(b)
    }
    fn base(_: &K, v: &V) -> Option<V> {
        Some(v.clone())
    }
    fn combine(a: &Option<V>, b: &Option<V>) -> Option<V> {
        if b > a {
            b.clone()
        } else {
            a.clone()
        }
    }
    fn identity() -> Option<V> {
        None
    }
}

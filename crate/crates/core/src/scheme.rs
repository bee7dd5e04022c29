//! Balancing schemes. A scheme contributes only `join`; every other
//! operation is written against `join` and is scheme independent.

use std::collections::hash_map::DefaultHasher;
use std::fmt::Debug;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::counters;
use crate::node::{expose, make_node, size, Link, Node, Shell};

pub trait Scheme: Sized + Send + Sync + 'static {
    /// Per-node balancing metadata beyond the subtree size.
    type Data: Copy + Debug + Send + Sync + 'static;

    const NAME: &'static str;

    fn data_for<K: Hash>(key: &K) -> Self::Data;

    /// Joins `left`, the shell entry and `right`, where every key of `left`
    /// is below the shell's key and every key of `right` above it.
    fn join<S: AugSpec>(left: Link<S, Self>, mid: Shell<S, Self>, right: Link<S, Self>) -> Arc<Node<S, Self>>;

    /// Checks this scheme's balance condition at a single node.
    fn node_balanced<S: AugSpec>(node: &Node<S, Self>) -> bool;
}

/// Weight-balanced trees with `alpha = ALPHA_NUM / ALPHA_DEN`.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeightBalanced;

pub const ALPHA_NUM: u64 = 29;
pub const ALPHA_DEN: u64 = 100;

/// Whether subtrees of sizes `l` and `r` may be siblings: each side's
/// weight (size + 1) is at least alpha of the combined weight.
#[inline]
pub fn weight_balanced(l: usize, r: usize) -> bool {
    let (wl, wr) = (l as u64 + 1, r as u64 + 1);
    let total = ALPHA_NUM * (wl + wr);
    total <= ALPHA_DEN * wl && total <= ALPHA_DEN * wr
}

/// `heavy` is too heavy to sit next to `light`.
#[inline]
fn too_heavy(heavy: usize, light: usize) -> bool {
    ALPHA_NUM * (heavy as u64 + light as u64 + 2) > ALPHA_DEN * (light as u64 + 1)
}

impl WeightBalanced {
    fn join_right<S: AugSpec>(l: Link<S, Self>, mid: Shell<S, Self>, r: Link<S, Self>) -> Arc<Node<S, Self>> {
        if weight_balanced(size(&l), size(&r)) {
            return make_node(l, mid, r);
        }
        let l = l.expect("weight-balanced join descended past a leaf");
        counters::visited();
        let (ll, lmid, lr) = expose(l);
        let t = Self::join_right(lr, mid, r);
        let lsize = size(&ll);
        if weight_balanced(lsize, t.size) {
            return make_node(ll, lmid.into_shell(), Some(t));
        }
        counters::visited();
        let (tl, tmid, tr) = expose(t);
        let tlsize = size(&tl);
        if weight_balanced(lsize, tlsize) && weight_balanced(lsize + tlsize + 1, size(&tr)) {
            let inner = make_node(ll, lmid.into_shell(), tl);
            make_node(Some(inner), tmid.into_shell(), tr)
        } else {
            counters::visited();
            let (a, m2, b) = expose(tl.expect("double rotation needs an inner grandchild"));
            let left = make_node(ll, lmid.into_shell(), a);
            let right = make_node(b, tmid.into_shell(), tr);
            make_node(Some(left), m2.into_shell(), Some(right))
        }
    }

    fn join_left<S: AugSpec>(l: Link<S, Self>, mid: Shell<S, Self>, r: Link<S, Self>) -> Arc<Node<S, Self>> {
        if weight_balanced(size(&l), size(&r)) {
            return make_node(l, mid, r);
        }
        let r = r.expect("weight-balanced join descended past a leaf");
        counters::visited();
        let (rl, rmid, rr) = expose(r);
        let t = Self::join_left(l, mid, rl);
        let rsize = size(&rr);
        if weight_balanced(t.size, rsize) {
            return make_node(Some(t), rmid.into_shell(), rr);
        }
        counters::visited();
        let (tl, tmid, tr) = expose(t);
        let trsize = size(&tr);
        if weight_balanced(trsize, rsize) && weight_balanced(size(&tl), trsize + rsize + 1) {
            let inner = make_node(tr, rmid.into_shell(), rr);
            make_node(tl, tmid.into_shell(), Some(inner))
        } else {
            counters::visited();
            let (a, m2, b) = expose(tr.expect("double rotation needs an inner grandchild"));
            let left = make_node(tl, tmid.into_shell(), a);
            let right = make_node(b, rmid.into_shell(), rr);
            make_node(Some(left), m2.into_shell(), Some(right))
        }
    }
}

impl Scheme for WeightBalanced {
    type Data = ();

    const NAME: &'static str = "weight-balanced";

    fn data_for<K: Hash>(_: &K) {}

    fn join<S: AugSpec>(left: Link<S, Self>, mid: Shell<S, Self>, right: Link<S, Self>) -> Arc<Node<S, Self>> {
        let (ls, rs) = (size(&left), size(&right));
        let t = if too_heavy(ls, rs) {
            Self::join_right(left, mid, right)
        } else if too_heavy(rs, ls) {
            Self::join_left(left, mid, right)
        } else {
            make_node(left, mid, right)
        };
        debug_assert!(Self::node_balanced(&t));
        t
    }

    fn node_balanced<S: AugSpec>(node: &Node<S, Self>) -> bool {
        weight_balanced(size(&node.left), size(&node.right))
    }
}

/// Treaps with priorities taken from a fixed hash of the key, so equal key
/// sets always produce identical trees.
#[derive(Clone, Copy, Debug, Default)]
pub struct Treap;

pub fn key_priority<K: Hash>(key: &K) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    // splitmix64 finaliser
    let mut z = h.finish().wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Scheme for Treap {
    type Data = u64;

    const NAME: &'static str = "treap";

    fn data_for<K: Hash>(key: &K) -> u64 {
        key_priority(key)
    }

    fn join<S: AugSpec>(left: Link<S, Self>, mid: Shell<S, Self>, right: Link<S, Self>) -> Arc<Node<S, Self>> {
        let pm = mid.balance();
        let pl = left.as_ref().map(|n| n.balance);
        let pr = right.as_ref().map(|n| n.balance);
        match (pl, pr) {
            (Some(pl), _) if pl > pm && pr.is_none_or(|pr| pl >= pr) => {
                counters::visited();
                let (ll, lmid, lr) = expose(left.unwrap());
                let t = Self::join(lr, mid, right);
                make_node(ll, lmid.into_shell(), Some(t))
            }
            (_, Some(pr)) if pr > pm => {
                counters::visited();
                let (rl, rmid, rr) = expose(right.unwrap());
                let t = Self::join(left, mid, rl);
                make_node(Some(t), rmid.into_shell(), rr)
            }
            _ => make_node(left, mid, right),
        }
    }

    fn node_balanced<S: AugSpec>(node: &Node<S, Self>) -> bool {
        node.left.as_ref().is_none_or(|l| l.balance <= node.balance)
            && node.right.as_ref().is_none_or(|r| r.balance <= node.balance)
    }
}

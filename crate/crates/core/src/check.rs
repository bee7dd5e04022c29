//! Whole-tree invariant validation, used by tests and debug tooling.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::sync::Arc;

use crate::augment::AugSpec;
use crate::error::InvariantViolation;
use crate::node::Node;
use crate::scheme::Scheme;

/// Summary of a validated tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeShape {
    pub size: usize,
    pub height: usize,
}

/// Checks key order, size fields, the scheme's balance condition and that
/// every cached augmented value equals a bottom-up recomputation from the
/// entries.
pub fn validate<S, B>(t: Option<&Arc<Node<S, B>>>) -> Result<TreeShape, InvariantViolation>
where
    S: AugSpec,
    S::Key: Debug,
    S::Aug: PartialEq + Debug,
    B: Scheme,
{
    let (shape, _) = walk(t, None, None)?;
    Ok(shape)
}

type Walked<S> = (TreeShape, Option<<S as AugSpec>::Aug>);

fn walk<S, B>(
    t: Option<&Arc<Node<S, B>>>,
    lo: Option<&S::Key>,
    hi: Option<&S::Key>,
) -> Result<Walked<S>, InvariantViolation>
where
    S: AugSpec,
    S::Key: Debug,
    S::Aug: PartialEq + Debug,
    B: Scheme,
{
    let Some(n) = t else { return Ok((TreeShape { size: 0, height: 0 }, None)) };
    if lo.is_some_and(|lo| S::compare(lo, &n.key) != Ordering::Less)
        || hi.is_some_and(|hi| S::compare(&n.key, hi) != Ordering::Less)
    {
        return Err(InvariantViolation::Order(format!("{:?} outside ({lo:?}, {hi:?})", n.key)));
    }
    let (ls, la) = walk(n.left.as_ref(), lo, Some(&n.key))?;
    let (rs, ra) = walk(n.right.as_ref(), Some(&n.key), hi)?;
    let size = ls.size + rs.size + 1;
    if n.size != size {
        return Err(InvariantViolation::Size(format!("{:?}: stored {} actual {size}", n.key, n.size)));
    }
    if !B::node_balanced(n) {
        return Err(InvariantViolation::Balance(format!(
            "{:?}: {} scheme, children {} / {}",
            n.key,
            B::NAME,
            ls.size,
            rs.size
        )));
    }
    let mut aug = S::base(&n.key, &n.value);
    if let Some(la) = la {
        aug = S::combine(&la, &aug);
    }
    if let Some(ra) = ra {
        aug = S::combine(&aug, &ra);
    }
    if aug != n.aug {
        return Err(InvariantViolation::Aug(format!("{:?}: cached {:?} recomputed {aug:?}", n.key, n.aug)));
    }
    let height = ls.height.max(rs.height) + 1;
    Ok((TreeShape { size, height }, Some(aug)))
}

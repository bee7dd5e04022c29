//! Interval tree: intervals keyed by left endpoint, augmented with the
//! maximum right endpoint.
//!
//! Intervals are closed. Two intervals with the same left endpoint collapse
//! into one that keeps the larger right endpoint.

use std::hash::Hash;

use augmap::{AugMap, Max};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("interval has left endpoint {left} greater than right endpoint {right}")]
pub struct IntervalError {
    pub left: String,
    pub right: String,
}

type Inner<P> = AugMap<Max<P, P>>;

#[derive(Clone)]
pub struct IntervalMap<P>
where
    P: Ord + Clone + Hash + Send + Sync + 'static,
{
    map: Inner<P>,
}

impl<P> Default for IntervalMap<P>
where
    P: Ord + Clone + Hash + Send + Sync + 'static,
{
    fn default() -> Self {
        Self { map: AugMap::new() }
    }
}

fn keep_max<P: Ord + Clone>(a: &P, b: &P) -> P {
    a.max(b).clone()
}

fn checked<P: Ord + std::fmt::Debug>(l: &P, r: &P) -> Result<(), IntervalError> {
    if l > r {
        return Err(IntervalError { left: format!("{l:?}"), right: format!("{r:?}") });
    }
    Ok(())
}

impl<P> IntervalMap<P>
where
    P: Ord + Clone + Hash + Send + Sync + std::fmt::Debug + 'static,
{
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(intervals: Vec<(P, P)>) -> Result<Self, IntervalError> {
        for (l, r) in &intervals {
            checked(l, r)?;
        }
        Ok(Self { map: AugMap::build(intervals, keep_max) })
    }

    pub fn insert(&self, left: P, right: P) -> Result<Self, IntervalError> {
        checked(&left, &right)?;
        Ok(Self { map: self.map.insert_with(left, right, keep_max) })
    }

    /// Removes the interval starting at `left`, if any.
    pub fn delete(&self, left: &P) -> Self {
        Self { map: self.map.delete(left) }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Largest right endpoint, `None` when empty.
    pub fn max_right(&self) -> Option<P> {
        self.map.aug_val()
    }

    /// Whether some interval contains `p`.
    pub fn stab(&self, p: &P) -> bool {
        self.map.aug_left(p).is_some_and(|r| r >= *p)
    }

    /// Every interval containing `p`, ordered by left endpoint.
    pub fn report_all(&self, p: &P) -> Vec<(P, P)> {
        self.map.up_to(p).aug_filter(|r| r.as_ref().is_some_and(|r| r >= p)).to_vec()
    }

    pub fn intervals(&self) -> Vec<(P, P)> {
        self.map.to_vec()
    }

    pub fn as_map(&self) -> &AugMap<Max<P, P>> {
        &self.map
    }
}

impl<P> std::fmt::Debug for IntervalMap<P>
where
    P: Ord + Clone + Hash + Send + Sync + std::fmt::Debug + 'static,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.map.iter()).finish()
    }
}

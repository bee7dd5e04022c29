//! Length and number of longest strictly increasing subsequences.
//!
//! Elements are inserted left to right into a map keyed by element value.
//! Each key stores the length and count of the longest increasing
//! subsequences ending at that value, and the augmentation keeps the best
//! length with the counts of all subsequences achieving it. The answer for
//! an element is read from the exclusive prefix of smaller keys.

use std::cmp::Ordering;
use std::hash::Hash;
use std::marker::PhantomData;

use augmap::{AugMap, AugSpec};
use num_bigint::BigUint;

/// Length and multiplicity of longest increasing subsequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lis {
    pub len: usize,
    pub count: BigUint,
}

impl Lis {
    pub fn new(len: usize, count: impl Into<BigUint>) -> Self {
        Self { len, count: count.into() }
    }

    /// `(0, 1)`: the empty subsequence, counted once.
    pub fn empty() -> Self {
        Self::new(0, 1u32)
    }

    /// Keeps the longer length; equal lengths add their counts. The empty
    /// value is a two-sided identity.
    pub fn combine(a: &Lis, b: &Lis) -> Lis {
        if a.len == 0 {
            return b.clone();
        }
        if b.len == 0 {
            return a.clone();
        }
        match a.len.cmp(&b.len) {
            Ordering::Greater => a.clone(),
            Ordering::Less => b.clone(),
            Ordering::Equal => Lis { len: a.len, count: &a.count + &b.count },
        }
    }
}

pub struct LisSpec<K>(PhantomData<fn() -> K>);

impl<K: Ord + Clone + Hash + Send + Sync + 'static> AugSpec for LisSpec<K> {
    type Key = K;
    type Value = Lis;
    type Aug = Lis;

    fn compare(a: &K, b: &K) -> Ordering {
        a.cmp(b)
    }
    fn base(_: &K, v: &Lis) -> Lis {
        v.clone()
    }
    fn combine(a: &Lis, b: &Lis) -> Lis {
        Lis::combine(a, b)
    }
    fn identity() -> Lis {
        Lis::empty()
    }
}

/// Incremental state after a prefix of the sequence.
#[derive(Clone)]
pub struct LisState<K: Ord + Clone + Hash + Send + Sync + 'static> {
    map: AugMap<LisSpec<K>>,
}

impl<K: Ord + Clone + Hash + Send + Sync + 'static> Default for LisState<K> {
    fn default() -> Self {
        Self { map: AugMap::new() }
    }
}

impl<K: Ord + Clone + Hash + Send + Sync + 'static> LisState<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `x`, returning the length and count of the longest increasing
    /// subsequences that end at this occurrence.
    pub fn push(&mut self, x: K) -> Lis {
        let before = self.map.aug_left_excl(&x);
        let here = Lis { len: before.len + 1, count: before.count };
        self.map.insert_mut_with(x, here.clone(), Lis::combine);
        here
    }

    /// Answer for the prefix seen so far.
    pub fn result(&self) -> Lis {
        self.map.aug_val()
    }

    /// Per distinct value, the combined answer over every occurrence.
    pub fn entries(&self) -> Vec<(K, Lis)> {
        self.map.to_vec()
    }
}

/// Length and number of longest strictly increasing subsequences of `seq`,
/// counting subsequences by position. The empty sequence gives `(0, 1)`.
pub fn lis_count<K: Ord + Clone + Hash + Send + Sync + 'static>(seq: &[K]) -> Lis {
    let mut state = LisState::new();
    for x in seq {
        state.push(x.clone());
    }
    state.result()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(lis_count::<i64>(&[]), Lis::new(0, 1u32));
        assert_eq!(lis_count(&[2, 1, 3]), Lis::new(2, 2u32));
        assert_eq!(lis_count(&[1, 2, 3]), Lis::new(3, 1u32));
        assert_eq!(lis_count(&[3, 2, 1]), Lis::new(1, 3u32));
        assert_eq!(lis_count(&[2, 2]), Lis::new(1, 2u32));
        assert_eq!(lis_count(&[1, 2, 2, 3]), Lis::new(3, 2u32));
    }

    #[test]
    fn identity_is_two_sided() {
        let x = Lis::new(3, 7u32);
        assert_eq!(Lis::combine(&Lis::empty(), &x), x);
        assert_eq!(Lis::combine(&x, &Lis::empty()), x);
        assert_eq!(Lis::combine(&Lis::empty(), &Lis::empty()), Lis::empty());
    }

    #[test]
    fn counts_grow_past_machine_words() {
        // pairs (2i+1, 2i) give 2^n longest subsequences of length n
        let seq: Vec<i64> = (0..100).flat_map(|i| [2 * i + 1, 2 * i]).collect();
        let r = lis_count(&seq);
        assert_eq!(r.len, 100);
        assert_eq!(r.count, BigUint::from(1u32) << 100);
    }
}

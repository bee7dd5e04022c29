use std::collections::BTreeMap;

use augmap::{AugMap, AugSpec, Max, Scheme, Sum, Treap, WeightBalanced};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Interleaves insert/delete/union/filter on a small pool of maps and checks
/// the cached augmentation against a bottom-up recomputation every 100 ops.
fn fuzz<S, B>(ops: usize, seed: u64)
where
    S: AugSpec<Key = i64, Value = i64>,
    S::Aug: PartialEq + std::fmt::Debug,
    B: Scheme,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut maps: Vec<AugMap<S, B>> = vec![AugMap::new(); 4];
    let mut refs: Vec<BTreeMap<i64, i64>> = vec![BTreeMap::new(); 4];
    for step in 1..=ops {
        let i = rng.random_range(0..maps.len());
        match rng.random_range(0..10) {
            0..=4 => {
                let (k, v) = (rng.random_range(0..4096), rng.random_range(-1000..1000));
                maps[i].insert_mut_with(k, v, |o, n| o + n);
                *refs[i].entry(k).or_insert(0) += v;
            }
            5..=6 => {
                let k = rng.random_range(0..4096);
                maps[i].delete_mut(&k);
                refs[i].remove(&k);
            }
            7 => {
                let j = rng.random_range(0..maps.len());
                maps[i] = maps[i].union(&maps[j], |a, b| a - b);
                let other = refs[j].clone();
                for (k, v) in other {
                    refs[i].entry(k).and_modify(|x| *x -= v).or_insert(v);
                }
            }
            8 => {
                let d = rng.random_range(2..5);
                maps[i] = maps[i].filter(|k, _| k % d != 0);
                refs[i].retain(|k, _| k % d != 0);
            }
            _ => {
                let lo = rng.random_range(0..4096);
                maps[i] = maps[i].range(&lo, &(lo + 2048));
                refs[i].retain(|k, _| (lo..=lo + 2048).contains(k));
            }
        }
        if step % 100 == 0 {
            for (m, r) in maps.iter().zip(&refs) {
                m.check_invariants().unwrap();
                let expected = r.iter().fold(S::identity(), |a, (k, v)| S::combine(&a, &S::base(k, v)));
                assert_eq!(m.aug_val(), expected, "step {step}");
            }
        }
    }
    for (m, r) in maps.iter().zip(&refs) {
        assert_eq!(m.to_vec(), r.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>());
    }
}

#[test]
fn sum_augmentation_stays_sound_wb() {
    fuzz::<Sum<i64, i64>, WeightBalanced>(20_000, 1);
}

#[test]
fn max_augmentation_stays_sound_wb() {
    fuzz::<Max<i64, i64>, WeightBalanced>(20_000, 2);
}

#[test]
fn sum_augmentation_stays_sound_treap() {
    fuzz::<Sum<i64, i64>, Treap>(20_000, 3);
}

#[test]
fn max_augmentation_stays_sound_treap() {
    fuzz::<Max<i64, i64>, Treap>(20_000, 4);
}

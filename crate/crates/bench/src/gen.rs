//! Deterministic synthetic inputs. The same `(n, seed)` always yields the
//! same output.

use augmap_apps::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

pub const INTERVAL_DOMAIN: i64 = 1 << 30;
pub const MAX_INTERVAL_LEN: i64 = 1 << 20;
pub const POINT_DOMAIN: i64 = 1 << 20;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform 64-bit keys with 32-bit values, so sums over `2^32` entries fit
/// in a `u64`. Duplicate keys are possible.
pub fn gen_keys(n: usize, seed: u64) -> Vec<(u64, u64)> {
    let mut r = rng(seed);
    (0..n).map(|_| (r.random(), r.random::<u32>() as u64)).collect()
}

/// Closed intervals with `l <= r`.
pub fn gen_intervals(n: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let l = r.random_range(0..INTERVAL_DOMAIN);
            (l, l + r.random_range(0..MAX_INTERVAL_LEN))
        })
        .collect()
}

/// Points in `[0, POINT_DOMAIN)^2` with weights in `1..=100`.
pub fn gen_points(n: usize, seed: u64) -> Vec<(Point<i64>, i64)> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let p = Point::new(r.random_range(0..POINT_DOMAIN), r.random_range(0..POINT_DOMAIN));
            (p, r.random_range(1..=100))
        })
        .collect()
}

/// `(term, doc, weight)` triples. Terms follow a Zipf law over a vocabulary
/// of `max(n / 16, 1)` words, documents are uniform over `0..n`, weights
/// are uniform in `(0, 1]`.
pub fn gen_triples(n: usize, seed: u64) -> Vec<(String, u64, f64)> {
    let mut r = rng(seed);
    let vocab = (n / 16).max(1);
    let zipf = Zipf::new(vocab as f64, 1.0).expect("vocabulary is nonempty");
    (0..n)
        .map(|_| {
            let term = zipf.sample(&mut r) as u64;
            let doc = r.random_range(0..n.max(1) as u64);
            (format!("t{term}"), doc, 1.0 - r.random::<f64>())
        })
        .collect()
}

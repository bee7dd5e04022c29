//! Instrumented benchmark runs.

use std::collections::BTreeMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::time::Instant;

use augmap::counters::{self, Counters};
use augmap::{AugMap, Max, Scheme, Sum, Treap, WeightBalanced};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::gen_keys;

pub const OPS: &[&str] = &[
    "union",
    "intersect",
    "difference",
    "find",
    "insert",
    "build",
    "filter",
    "multi-insert",
    "range",
    "aug-left",
    "aug-range",
    "aug-filter",
];

/// Runs larger than this are checked against a `BTreeMap` oracle only when
/// `n * max(m, 1)` stays under it.
pub const ORACLE_LIMIT: usize = 1 << 18;

/// Inputs beyond this many entries are refused instead of risking an abort
/// on allocation failure.
pub const SIZE_LIMIT: usize = 1 << 26;

/// Range queries select about this many keys.
const RANGE_WIDTH: u64 = 64;

/// Desk-scale `(n, m)` matrix.
pub fn default_matrix() -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for n in [1 << 16, 1 << 20] {
        for m in [1 << 6, 1 << 10, 1 << 16, 1 << 20] {
            v.push((n, m));
        }
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    #[default]
    WeightBalanced,
    Treap,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::WeightBalanced => "weight-balanced",
            SchemeKind::Treap => "treap",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s {
            "weight-balanced" | "wb" => Ok(SchemeKind::WeightBalanced),
            "treap" => Ok(SchemeKind::Treap),
            _ => Err(BenchError::UnknownScheme(s.to_owned())),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("unknown operation {0:?}; expected one of: {ops}", ops = OPS.join(", "))]
    UnknownOp(String),
    #[error("unknown scheme {0:?}; expected weight-balanced or treap")]
    UnknownScheme(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub op: String,
    pub n: usize,
    pub m: usize,
    pub threads: usize,
    pub rounds: usize,
    pub seed: u64,
    pub scheme: SchemeKind,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { op: "union".into(), n: 1 << 16, m: 1 << 10, threads: 1, rounds: 5, seed: 1, scheme: SchemeKind::default() }
    }
}

/// One benchmark result. Counters describe the first round; `wall_ns` is
/// the median over all rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub op: String,
    pub n: usize,
    pub m: usize,
    pub threads: usize,
    pub rounds: usize,
    pub seed: u64,
    pub scheme: SchemeKind,
    pub wall_ns: u64,
    pub comparisons: u64,
    pub nodes_allocated: u64,
    pub nodes_freed: u64,
    pub peak_live_nodes: u64,
    pub tasks: u64,
    pub speedup: Option<f64>,
    pub verified: bool,
    pub error: Option<String>,
}

impl BenchRecord {
    fn new(cfg: &BenchConfig) -> Self {
        Self {
            op: cfg.op.clone(),
            n: cfg.n,
            m: cfg.m,
            threads: cfg.threads,
            rounds: cfg.rounds,
            seed: cfg.seed,
            scheme: cfg.scheme,
            wall_ns: 0,
            comparisons: 0,
            nodes_allocated: 0,
            nodes_freed: 0,
            peak_live_nodes: 0,
            tasks: 0,
            speedup: None,
            verified: false,
            error: None,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Runs `cfg.op`, `cfg.rounds` times. With more than one thread the same
/// configuration is also run sequentially to fill in `speedup`.
///
/// Configuration errors are returned as `Err`; failures during the run
/// (oracle mismatch, panics, refused sizes) come back as a record with
/// `error` set.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchRecord, BenchError> {
    if !OPS.contains(&cfg.op.as_str()) {
        return Err(BenchError::UnknownOp(cfg.op.clone()));
    }
    if cfg.rounds == 0 || cfg.threads == 0 {
        return Err(BenchError::InvalidConfig("rounds and threads must be at least 1".into()));
    }
    let mut record = BenchRecord::new(cfg);
    if cfg.n > SIZE_LIMIT || cfg.m > SIZE_LIMIT {
        record.error = Some(format!("resource limit: sizes above {SIZE_LIMIT} are refused"));
        return Ok(record);
    }
    match sample(cfg, cfg.threads) {
        Ok(s) => {
            record.wall_ns = s.wall_ns;
            record.comparisons = s.counters.comparisons;
            record.nodes_allocated = s.counters.allocated;
            record.nodes_freed = s.counters.freed;
            record.peak_live_nodes = s.peak_live;
            record.tasks = s.counters.tasks;
            record.verified = s.verified;
        }
        Err(e) => {
            record.error = Some(e);
            return Ok(record);
        }
    }
    if cfg.threads > 1 {
        match sample(cfg, 1) {
            Ok(base) => record.speedup = Some(base.wall_ns as f64 / record.wall_ns.max(1) as f64),
            Err(e) => record.error = Some(format!("sequential baseline: {e}")),
        }
    }
    Ok(record)
}

struct Sample {
    wall_ns: u64,
    counters: Counters,
    peak_live: u64,
    verified: bool,
}

fn sample(cfg: &BenchConfig, threads: usize) -> Result<Sample, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    let run = || {
        pool.install(|| match cfg.scheme {
            SchemeKind::WeightBalanced => rounds::<WeightBalanced>(cfg),
            SchemeKind::Treap => rounds::<Treap>(cfg),
        })
    };
    catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn rounds<B: Scheme>(cfg: &BenchConfig) -> Result<Sample, String> {
    let mut times = Vec::with_capacity(cfg.rounds);
    let mut first = None;
    for _ in 0..cfg.rounds {
        let r = round::<B>(cfg)?;
        times.push(r.wall_ns);
        first.get_or_insert(r);
    }
    times.sort_unstable();
    let mut s = first.expect("rounds >= 1");
    s.wall_ns = times[times.len() / 2];
    Ok(s)
}

type SumMap<B> = AugMap<Sum<u64, u64>, B>;
type MaxMap<B> = AugMap<Max<u64, u64>, B>;
type Oracle = BTreeMap<u64, u64>;

fn add(a: &u64, b: &u64) -> u64 {
    a + b
}

fn oracle(entries: &[(u64, u64)]) -> Oracle {
    let mut m = Oracle::new();
    for &(k, v) in entries {
        *m.entry(k).or_insert(0) += v;
    }
    m
}

fn entries(m: &Oracle) -> Vec<(u64, u64)> {
    m.iter().map(|(k, v)| (*k, *v)).collect()
}

/// Replaces every other generated key with one drawn from `from`, so set
/// operations and lookups hit existing keys about half the time.
fn overlapping(mut s: Vec<(u64, u64)>, from: &[(u64, u64)]) -> Vec<(u64, u64)> {
    if !from.is_empty() {
        for (i, e) in s.iter_mut().enumerate().step_by(2) {
            e.0 = from[(e.0 as usize ^ i) % from.len()].0;
        }
    }
    s
}

struct Timed<R> {
    out: R,
    ns: u64,
    counters: Counters,
    live_after: i64,
}

fn timed<R>(f: impl FnOnce() -> R) -> Timed<R> {
    let before = counters::snapshot();
    let t = Instant::now();
    let out = f();
    let ns = t.elapsed().as_nanos() as u64;
    let counters = counters::snapshot() - before;
    Timed { out, ns, counters, live_after: counters::live_nodes() }
}

/// Either a resulting map or a checksum, compared against the oracle.
enum Output {
    Map(Vec<(u64, u64)>),
    Value(u64),
}

fn round<B: Scheme>(cfg: &BenchConfig) -> Result<Sample, String> {
    let base_live = counters::live_nodes();
    let (n, m) = (cfg.n, cfg.m);
    let a_in = gen_keys(n, cfg.seed);
    let b_in = overlapping(gen_keys(m, cfg.seed.wrapping_add(1)), &a_in);
    let check = n.saturating_mul(m.max(1)) <= ORACLE_LIMIT;
    let a: SumMap<B> = match cfg.op.as_str() {
        "build" | "aug-filter" => AugMap::new(),
        _ => AugMap::build(a_in.clone(), add),
    };
    let span = (u64::MAX / n.max(1) as u64).saturating_mul(RANGE_WIDTH);
    let mut peak = counters::live_nodes() - base_live;

    let (t, expected): (Timed<Output>, Option<Output>) = match cfg.op.as_str() {
        "union" | "intersect" | "difference" => {
            let b: SumMap<B> = AugMap::build(b_in.clone(), add);
            peak = peak.max(counters::live_nodes() - base_live);
            let t = timed(|| match cfg.op.as_str() {
                "union" => a.union(&b, add),
                "intersect" => a.intersect(&b, add),
                _ => a.difference(&b),
            });
            let exp = check.then(|| {
                let (oa, ob) = (oracle(&a_in), oracle(&b_in));
                let mut r = Oracle::new();
                match cfg.op.as_str() {
                    "union" => {
                        r = oa;
                        for (k, v) in ob {
                            *r.entry(k).or_insert(0) += v;
                        }
                    }
                    "intersect" => {
                        for (k, v) in oa {
                            if let Some(w) = ob.get(&k) {
                                r.insert(k, v + w);
                            }
                        }
                    }
                    _ => r = oa.into_iter().filter(|(k, _)| !ob.contains_key(k)).collect(),
                }
                Output::Map(entries(&r))
            });
            (map_output(t), exp)
        }
        "find" => {
            let t = timed(|| b_in.iter().filter_map(|(k, _)| a.find(k)).fold(0u64, |s, v| s.wrapping_add(*v)));
            let exp = check.then(|| {
                let o = oracle(&a_in);
                Output::Value(b_in.iter().filter_map(|(k, _)| o.get(k)).fold(0u64, |s, v| s.wrapping_add(*v)))
            });
            (value_output(t), exp)
        }
        "insert" => {
            let t = timed(|| {
                let mut t = a.clone();
                for &(k, v) in &b_in {
                    t.insert_mut_with(k, v, add);
                }
                t
            });
            let exp = check.then(|| {
                let mut o = oracle(&a_in);
                for &(k, v) in &b_in {
                    *o.entry(k).or_insert(0) += v;
                }
                Output::Map(entries(&o))
            });
            (map_output(t), exp)
        }
        "build" => {
            let input = a_in.clone();
            let t = timed(|| SumMap::<B>::build(input, add));
            (map_output(t), check.then(|| Output::Map(entries(&oracle(&a_in)))))
        }
        "filter" => {
            let t = timed(|| a.filter(|k, _| k % 2 == 0));
            let exp = check.then(|| Output::Map(oracle(&a_in).into_iter().filter(|(k, _)| k % 2 == 0).collect()));
            (map_output(t), exp)
        }
        "multi-insert" => {
            let input = b_in.clone();
            let t = timed(|| a.multi_insert(input, add));
            let exp = check.then(|| {
                let mut o = oracle(&a_in);
                for (k, v) in oracle(&b_in) {
                    *o.entry(k).or_insert(0) += v;
                }
                Output::Map(entries(&o))
            });
            (map_output(t), exp)
        }
        "range" => {
            let t = timed(|| {
                b_in.iter().fold(0u64, |s, (k, _)| {
                    let r = a.range(k, &k.saturating_add(span));
                    s.wrapping_add(r.len() as u64).wrapping_add(r.aug_val())
                })
            });
            let exp = check.then(|| {
                let o = oracle(&a_in);
                Output::Value(b_in.iter().fold(0u64, |s, (k, _)| {
                    let r = o.range(*k..=k.saturating_add(span));
                    let (len, sum) = r.fold((0u64, 0u64), |(c, t), (_, v)| (c + 1, t + v));
                    s.wrapping_add(len).wrapping_add(sum)
                }))
            });
            (value_output(t), exp)
        }
        "aug-left" => {
            let t = timed(|| b_in.iter().fold(0u64, |s, (k, _)| s.wrapping_add(a.aug_left(k))));
            let exp = check.then(|| {
                let o = oracle(&a_in);
                Output::Value(b_in.iter().fold(0u64, |s, (k, _)| s.wrapping_add(o.range(..=*k).map(|e| *e.1).sum())))
            });
            (value_output(t), exp)
        }
        "aug-range" => {
            let t = timed(|| b_in.iter().fold(0u64, |s, (k, _)| s.wrapping_add(a.aug_range(k, &k.saturating_add(span)))));
            let exp = check.then(|| {
                let o = oracle(&a_in);
                Output::Value(
                    b_in.iter()
                        .fold(0u64, |s, (k, _)| s.wrapping_add(o.range(*k..=k.saturating_add(span)).map(|e| *e.1).sum())),
                )
            });
            (value_output(t), exp)
        }
        "aug-filter" => {
            let x: MaxMap<B> = AugMap::build(a_in.clone(), |_, v| *v);
            peak = peak.max(counters::live_nodes() - base_live);
            // about m of the n values exceed the threshold
            let theta = u32::MAX as u64 - (u32::MAX as u64 / n.max(1) as u64).saturating_mul(m as u64);
            let t = timed(|| x.aug_filter(|a| a.is_some_and(|v| v > theta)));
            let exp = check.then(|| {
                let mut o = Oracle::new();
                for &(k, v) in &a_in {
                    o.insert(k, v);
                }
                Output::Map(o.into_iter().filter(|(_, v)| *v > theta).collect())
            });
            (map_output(t), exp)
        }
        other => return Err(format!("unknown operation {other:?}")),
    };
    peak = peak.max(t.live_after - base_live);
    let verified = match (&t.out, &expected) {
        (_, None) => false,
        (Output::Map(got), Some(Output::Map(exp))) if got == exp => true,
        (Output::Value(got), Some(Output::Value(exp))) if got == exp => true,
        _ => return Err(format!("{} output disagrees with the reference implementation", cfg.op)),
    };
    Ok(Sample { wall_ns: t.ns, counters: t.counters, peak_live: peak.max(0) as u64, verified })
}

fn map_output<S: augmap::AugSpec<Key = u64, Value = u64>, B: Scheme>(t: Timed<AugMap<S, B>>) -> Timed<Output> {
    Timed { out: Output::Map(t.out.to_vec()), ns: t.ns, counters: t.counters, live_after: t.live_after }
}

fn value_output(t: Timed<u64>) -> Timed<Output> {
    Timed { out: Output::Value(t.out), ns: t.ns, counters: t.counters, live_after: t.live_after }
}

/// Writes a header line and one row per record.
pub fn write_csv<W: std::io::Write>(records: &[BenchRecord], w: W) -> Result<(), csv::Error> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub const CSV_HEADER: &[&str] = &[
    "op",
    "n",
    "m",
    "threads",
    "rounds",
    "seed",
    "scheme",
    "wall_ns",
    "comparisons",
    "nodes_allocated",
    "nodes_freed",
    "peak_live_nodes",
    "tasks",
    "speedup",
    "verified",
    "error",
];

pub fn emit_csv(records: &[BenchRecord], path: &str) -> Result<(), BenchError> {
    let file = std::fs::File::create(path).map_err(|source| BenchError::Io { path: path.into(), source })?;
    write_csv(records, file).map_err(|source| BenchError::Csv { path: path.into(), source })
}

pub fn read_csv(path: &str) -> Result<Vec<BenchRecord>, BenchError> {
    let err = |source| BenchError::Csv { path: path.into(), source };
    let mut r = csv::Reader::from_path(path).map_err(err)?;
    r.deserialize().collect::<Result<_, _>>().map_err(err)
}

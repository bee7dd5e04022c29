use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use augmap_apps::{lis_count, q_and, q_and_not, q_or, top_k, IntervalMap, InvertedIndex, PostingList, RangeMap};
use augmap_bench::gen::{INTERVAL_DOMAIN, POINT_DOMAIN};
use augmap_bench::{default_matrix, emit_csv, gen_intervals, gen_keys, gen_points, gen_triples, input, run_bench};
use augmap_bench::{BenchConfig, BenchRecord, SchemeKind, OPS};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "augmap-bench", version, about = "Benchmarks and application drivers for augmap")]
struct Cli {
    /// Worker threads; defaults to AUGMAP_THREADS, then to the number of CPUs.
    #[arg(long, global = true, env = "AUGMAP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time a map operation with counters and a reference check.
    Bench(BenchArgs),
    /// Interval stabbing queries.
    Interval(IntervalArgs),
    /// Weighted 2D range sums and reports.
    Range2d(RangeArgs),
    /// Ranked queries over an inverted index.
    Index(IndexArgs),
    /// Length and count of longest increasing subsequences.
    Lis(LisArgs),
}

#[derive(Args)]
struct BenchArgs {
    /// Operation name, or `all`.
    op: String,
    #[arg(long, default_value_t = 1 << 16)]
    n: usize,
    #[arg(long, default_value_t = 1 << 10)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    rounds: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// weight-balanced or treap.
    #[arg(long, default_value = "weight-balanced")]
    scheme: SchemeKind,
    /// Run the desk-scale (n, m) matrix instead of a single size.
    #[arg(long)]
    matrix: bool,
    /// Also write the records as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct Synthetic {
    /// File input; when absent, `--n` random items are generated.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Random queries to run when no explicit query is given.
    #[arg(long, default_value_t = 10_000)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct IntervalArgs {
    #[command(flatten)]
    data: Synthetic,
    /// Report whether any interval contains this point.
    #[arg(long)]
    stab: Vec<i64>,
    /// List the intervals containing this point.
    #[arg(long)]
    report: Vec<i64>,
}

#[derive(Args)]
struct RangeArgs {
    #[command(flatten)]
    data: Synthetic,
    /// Closed query rectangle `x_lo x_hi y_lo y_hi`; repeatable.
    #[arg(long, num_args = 4, value_names = ["X_LO", "X_HI", "Y_LO", "Y_HI"], allow_negative_numbers = true)]
    rect: Vec<i64>,
    /// Print the points in each rectangle, not only the weight sum.
    #[arg(long)]
    list: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    And,
    Or,
    AndNot,
}

#[derive(Args)]
struct IndexArgs {
    #[command(flatten)]
    data: Synthetic,
    /// Query terms, combined left to right with `--mode`.
    #[arg(long, value_delimiter = ',')]
    terms: Vec<String>,
    #[arg(long, value_enum, default_value = "and")]
    mode: Mode,
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Args)]
struct LisArgs {
    #[command(flatten)]
    data: Synthetic,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_record(r: &BenchRecord) {
    let status = match &r.error {
        Some(e) => format!("FAILED: {e}"),
        None if r.verified => "ok (verified)".into(),
        None => "ok".into(),
    };
    let speedup = r.speedup.map(|s| format!(" speedup={s:.2}")).unwrap_or_default();
    println!(
        "{:<13} n={:<8} m={:<8} threads={} scheme={} time={:.3}ms comparisons={} allocated={} freed={} peak_live={} tasks={}{} {}",
        r.op,
        r.n,
        r.m,
        r.threads,
        r.scheme,
        r.wall_ns as f64 / 1e6,
        r.comparisons,
        r.nodes_allocated,
        r.nodes_freed,
        r.peak_live_nodes,
        r.tasks,
        speedup,
        status
    );
}

fn bench(args: BenchArgs, threads: usize) -> Result<bool> {
    let ops: Vec<String> = if args.op == "all" { OPS.iter().map(|s| s.to_string()).collect() } else { vec![args.op] };
    let sizes = if args.matrix { default_matrix() } else { vec![(args.n, args.m)] };
    let mut records = Vec::new();
    for op in &ops {
        for &(n, m) in &sizes {
            let cfg = BenchConfig { op: op.clone(), n, m, threads, rounds: args.rounds, seed: args.seed, scheme: args.scheme };
            let r = run_bench(&cfg)?;
            print_record(&r);
            records.push(r);
        }
    }
    if let Some(path) = args.csv {
        emit_csv(&records, &path.to_string_lossy())?;
    }
    Ok(records.iter().all(BenchRecord::is_ok))
}

fn interval(args: IntervalArgs) -> Result<()> {
    let d = &args.data;
    let intervals = match &d.input {
        Some(p) => input::parse_intervals(&read(p)?)?,
        None => gen_intervals(d.n, d.seed),
    };
    let t = Instant::now();
    let map = IntervalMap::build(intervals)?;
    println!("built {} intervals in {:.3}ms", map.len(), t.elapsed().as_secs_f64() * 1e3);
    for p in &args.stab {
        println!("stab {p}: {}", map.stab(p));
    }
    for p in &args.report {
        let hits = map.report_all(p);
        let list: Vec<String> = hits.iter().map(|(l, r)| format!("[{l}, {r}]")).collect();
        println!("report {p}: {} interval(s) {}", hits.len(), list.join(" "));
    }
    if args.stab.is_empty() && args.report.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(d.seed.wrapping_add(1));
        let queries: Vec<i64> = (0..d.m).map(|_| rng.random_range(0..INTERVAL_DOMAIN)).collect();
        let t = Instant::now();
        let hits = queries.iter().filter(|p| map.stab(p)).count();
        println!("{} random stabbing queries: {hits} hit, {:.3}ms", d.m, t.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

fn range2d(args: RangeArgs) -> Result<()> {
    let d = &args.data;
    let points = match &d.input {
        Some(p) => input::parse_points(&read(p)?)?,
        None => gen_points(d.n, d.seed),
    };
    let t = Instant::now();
    let map = RangeMap::build(points);
    println!("built {} points in {:.3}ms", map.len(), t.elapsed().as_secs_f64() * 1e3);
    for r in args.rect.chunks_exact(4) {
        let (xl, xr, yl, yr) = (r[0], r[1], r[2], r[3]);
        println!("sum [{xl}, {xr}] x [{yl}, {yr}]: {}", map.range_sum(xl, xr, yl, yr));
        if args.list {
            for (p, w) in map.range_report(xl, xr, yl, yr) {
                println!("  ({}, {}) weight {w}", p.x, p.y);
            }
        }
    }
    if args.rect.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(d.seed.wrapping_add(1));
        let side = POINT_DOMAIN / 8;
        let t = Instant::now();
        let mut total = 0i64;
        for _ in 0..d.m {
            let (x, y) = (rng.random_range(0..POINT_DOMAIN - side), rng.random_range(0..POINT_DOMAIN - side));
            total += map.range_sum(x, x + side, y, y + side);
        }
        println!("{} random rectangle sums: total weight {total}, {:.3}ms", d.m, t.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

fn index(args: IndexArgs) -> Result<()> {
    let d = &args.data;
    let triples = match &d.input {
        Some(p) => input::parse_postings(&read(p)?)?,
        None => gen_triples(d.n, d.seed),
    };
    let t = Instant::now();
    let ix = InvertedIndex::build(triples)?;
    println!("indexed {} terms in {:.3}ms", ix.len(), t.elapsed().as_secs_f64() * 1e3);
    let terms = if args.terms.is_empty() { ix.terms().take(2).cloned().collect() } else { args.terms };
    let Some((first, rest)) = terms.split_first() else { bail!("the index is empty") };
    let mut acc: PostingList = ix.term(first);
    for term in rest {
        let p = ix.term(term);
        acc = match args.mode {
            Mode::And => q_and(&acc, &p),
            Mode::Or => q_or(&acc, &p),
            Mode::AndNot => q_and_not(&acc, &p),
        };
    }
    println!("query {:?}: {} document(s)", terms, acc.len());
    for (rank, (doc, w)) in top_k(&acc, args.top).into_iter().enumerate() {
        println!("{:>4}. doc {doc} weight {w:.6}", rank + 1);
    }
    Ok(())
}

fn lis(args: LisArgs) -> Result<()> {
    let d = &args.data;
    let seq: Vec<i64> = match &d.input {
        Some(p) => input::parse_sequence(&read(p)?)?,
        None => gen_keys(d.n, d.seed).into_iter().map(|(_, v)| v as i64).collect(),
    };
    let t = Instant::now();
    let r = lis_count(&seq);
    println!("length {} count {} ({} elements, {:.3}ms)", r.len, r.count, seq.len(), t.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let threads = match cli.threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    match cli.command {
        Command::Bench(a) => bench(a, threads),
        Command::Interval(a) => pool.install(|| interval(a)).map(|_| true),
        Command::Range2d(a) => pool.install(|| range2d(a)).map(|_| true),
        Command::Index(a) => pool.install(|| index(a)).map(|_| true),
        Command::Lis(a) => pool.install(|| lis(a)).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

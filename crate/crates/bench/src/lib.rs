//! Benchmark harness for `augmap`: deterministic input generators, counted
//! and timed benchmark runs checked against a reference implementation, and
//! CSV output.
//!
//! ```
//! use augmap_bench::{run_bench, BenchConfig};
//!
//! let cfg = BenchConfig { op: "union".into(), n: 1000, m: 100, rounds: 1, ..Default::default() };
//! let record = run_bench(&cfg).unwrap();
//! assert!(record.verified && record.error.is_none());
//! ```

pub mod gen;
pub mod input;
pub mod run;

pub use gen::{gen_intervals, gen_keys, gen_points, gen_triples};
pub use run::{default_matrix, emit_csv, read_csv, run_bench, write_csv, BenchConfig, BenchError, BenchRecord, SchemeKind, OPS};

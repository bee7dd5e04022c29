//! Applications of augmented maps: interval stabbing, weighted 2D range
//! queries, ranked retrieval over an inverted index, and counting longest
//! increasing subsequences.
//!
//! ```
//! use augmap_apps::IntervalMap;
//!
//! let m = IntervalMap::build(vec![(1, 5), (3, 4), (7, 9)]).unwrap();
//! assert!(m.stab(&2));
//! assert!(!m.stab(&6));
//! assert_eq!(m.report_all(&3), vec![(1, 5), (3, 4)]);
//! ```

pub mod index;
pub mod interval;
pub mod lis;
pub mod range2d;

pub use index::{q_and, q_and_not, q_or, top_k, DocId, IndexError, InvertedIndex, PostingList};
pub use interval::{IntervalError, IntervalMap};
pub use lis::{lis_count, Lis, LisState};
pub use range2d::{Coord, Point, RangeMap};

//! Persistent ordered maps augmented with a cached monoid sum per subtree.
//!
//! Every operation is built on a single balancing primitive, `join`, which
//! concatenates two trees around a middle entry. Bulk operations (union,
//! intersection, difference, filter, build, map-reduce) recurse on both
//! subtrees in parallel via rayon once subtrees are large enough.
//!
//! ```
//! use augmap::{AugMap, Sum};
//!
//! let m: AugMap<Sum<u32, u64>> = (1..=100).map(|i| (i, i as u64)).collect();
//! assert_eq!(m.aug_val(), 5050);
//! assert_eq!(m.aug_range(&10, &20), 165);
//! ```

pub mod augment;
pub mod check;
pub mod counters;
mod error;
mod kernel;
mod map;
pub mod node;
pub mod par;
mod query;
pub mod scheme;

pub use augment::{AugSpec, Max, Plain, Sum};
pub use check::TreeShape;
pub use counters::Counters;
pub use error::{InvariantViolation, MapError};
pub use map::{AugMap, Exposed, Iter, Split};
pub use scheme::{Scheme, Treap, WeightBalanced};

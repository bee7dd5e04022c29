//! Two-level range tree over weighted points.
//!
//! The outer map orders points by x and caches, per subtree, an inner map of
//! the same points ordered by y that is augmented with the weight sum. Inner
//! maps are combined by persistent union, so the inner trees of a parent
//! share most of their nodes with those of its children.

use std::cmp::Ordering;
use std::cell::RefCell;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::Add;

use augmap::{AugMap, AugSpec};

/// Coordinate type with explicit extremes, used to bound y-ordered searches.
pub trait Coord: Ord + Copy + Hash + Send + Sync + std::fmt::Debug + 'static {
    const MIN: Self;
    const MAX: Self;
}

macro_rules! coord {
    ($($t:ty),*) => {$(
        impl Coord for $t {
            const MIN: Self = <$t>::MIN;
            const MAX: Self = <$t>::MAX;
        }
    )*};
}
coord!(i32, i64, u32, u64);

/// Ordered by x, then y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point<C> {
    pub x: C,
    pub y: C,
}

impl<C> Point<C> {
    pub fn new(x: C, y: C) -> Self {
        Self { x, y }
    }
}

pub trait Weight: Copy + Default + Add<Output = Self> + Send + Sync + 'static {}
impl<W: Copy + Default + Add<Output = W> + Send + Sync + 'static> Weight for W {}

pub struct ByY<C, W>(PhantomData<fn() -> (C, W)>);

impl<C: Coord, W: Weight> AugSpec for ByY<C, W> {
    type Key = Point<C>;
    type Value = W;
    type Aug = W;

    fn compare(a: &Point<C>, b: &Point<C>) -> Ordering {
        a.y.cmp(&b.y).then(a.x.cmp(&b.x))
    }
    fn base(_: &Point<C>, w: &W) -> W {
        *w
    }
    fn combine(a: &W, b: &W) -> W {
        *a + *b
    }
    fn identity() -> W {
        W::default()
    }
}

pub type InnerMap<C, W> = AugMap<ByY<C, W>>;

pub struct ByX<C, W>(PhantomData<fn() -> (C, W)>);

impl<C: Coord, W: Weight> AugSpec for ByX<C, W> {
    type Key = Point<C>;
    type Value = W;
    type Aug = InnerMap<C, W>;

    fn compare(a: &Point<C>, b: &Point<C>) -> Ordering {
        a.cmp(b)
    }
    fn base(p: &Point<C>, w: &W) -> InnerMap<C, W> {
        AugMap::singleton(*p, *w)
    }
    fn combine(a: &InnerMap<C, W>, b: &InnerMap<C, W>) -> InnerMap<C, W> {
        a.union(b, |x, y| *x + *y)
    }
    fn identity() -> InnerMap<C, W> {
        AugMap::new()
    }
}

#[derive(Clone)]
pub struct RangeMap<C: Coord, W: Weight> {
    outer: AugMap<ByX<C, W>>,
}

impl<C: Coord, W: Weight> Default for RangeMap<C, W> {
    fn default() -> Self {
        Self { outer: AugMap::new() }
    }
}

impl<C: Coord, W: Weight> RangeMap<C, W> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Repeated points have their weights added.
    pub fn build(points: Vec<(Point<C>, W)>) -> Self {
        Self { outer: AugMap::build(points, |a, b| *a + *b) }
    }

    pub fn insert(&self, p: Point<C>, w: W) -> Self {
        Self { outer: self.outer.insert_with(p, w, |a, b| *a + *b) }
    }

    pub fn len(&self) -> usize {
        self.outer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn total_weight(&self) -> W {
        self.outer.root().map_or_else(W::default, |r| r.aug().aug_val())
    }

    /// The y-ordered map of every point, cached at the outer root.
    pub fn all_by_y(&self) -> InnerMap<C, W> {
        self.outer.aug_val()
    }

    pub fn outer(&self) -> &AugMap<ByX<C, W>> {
        &self.outer
    }

    fn x_bounds(x_lo: C, x_hi: C) -> (Point<C>, Point<C>) {
        (Point::new(x_lo, C::MIN), Point::new(x_hi, C::MAX))
    }

    fn y_bounds(y_lo: C, y_hi: C) -> (Point<C>, Point<C>) {
        (Point::new(C::MIN, y_lo), Point::new(C::MAX, y_hi))
    }

    /// Total weight of the points in the closed rectangle.
    pub fn range_sum(&self, x_lo: C, x_hi: C, y_lo: C, y_hi: C) -> W {
        if x_lo > x_hi || y_lo > y_hi {
            return W::default();
        }
        let (xa, xb) = Self::x_bounds(x_lo, x_hi);
        let (ya, yb) = Self::y_bounds(y_lo, y_hi);
        self.outer.aug_project_with(
            |p, w| if (y_lo..=y_hi).contains(&p.y) { *w } else { W::default() },
            |inner| inner.aug_range(&ya, &yb),
            |a, b| *a + *b,
            &xa,
            &xb,
        )
    }

    /// Points in the closed rectangle, ordered by x then y.
    pub fn range_report(&self, x_lo: C, x_hi: C, y_lo: C, y_hi: C) -> Vec<(Point<C>, W)> {
        if x_lo > x_hi || y_lo > y_hi {
            return Vec::new();
        }
        let (xa, xb) = Self::x_bounds(x_lo, x_hi);
        let (ya, yb) = Self::y_bounds(y_lo, y_hi);
        let out = RefCell::new(Vec::new());
        self.outer.aug_project_with(
            |p, w| {
                if (y_lo..=y_hi).contains(&p.y) {
                    out.borrow_mut().push((*p, *w));
                }
            },
            |inner| inner.for_each_in_range(&ya, &yb, |p, w| out.borrow_mut().push((*p, *w))),
            |_, _| (),
            &xa,
            &xb,
        );
        let mut out = out.into_inner();
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

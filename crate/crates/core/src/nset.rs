//! Exact set algebra over finite unions of axis-aligned boxes.
//!
//! An [`NSet`] is stored in a canonical form: a lexicographically sorted
//! list of pairwise-disjoint half-open boxes `[lo, hi)` with positive
//! volume, plus a list of closed degenerate boxes (some side of zero
//! length). Degenerate boxes matter for [`NSet::contains`] but never for
//! [`NSet::measure`].
//!
//! All boolean operations run a coordinate sweep: the breakpoints of the
//! operands on the first axis cut space into slabs, each slab's
//! cross-section is combined recursively on the remaining axes, and
//! neighbouring slabs with identical cross-sections are merged. Only
//! comparisons of input coordinates are involved, so the result is exact
//! and two NSets that are equal as point sets are equal structurally.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum SetError {
    DimensionMismatch { left: usize, right: usize },
    ZeroDimension,
    NonFiniteBound,
    InvertedInterval { lo: f64, hi: f64 },
    PartArity { expected: usize, found: usize },
}

impl fmt::Display for SetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            SetError::ZeroDimension => f.write_str("sets must have dimension at least 1"),
            SetError::NonFiniteBound => f.write_str("interval bounds must be finite"),
            SetError::InvertedInterval { lo, hi } => {
                write!(f, "interval lower bound {lo} exceeds upper bound {hi}")
            }
            SetError::PartArity { expected, found } => {
                write!(f, "box has {found} sides, expected {expected}")
            }
        }
    }
}

impl core::error::Error for SetError {}

/// A one-dimensional interval with explicit endpoint closedness.
///
/// This is the user-facing way to write ranges such as `[90,140)` or
/// `(160,260]`. Inside an [`NSet`] every interval of positive length is
/// normalised to `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self, SetError> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(SetError::NonFiniteBound);
        }
        if lo > hi {
            return Err(SetError::InvertedInterval { lo, hi });
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self, SetError> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self, SetError> {
        Self::new(lo, hi, false, false)
    }

    /// `[lo, hi)`
    pub fn half_open(lo: f64, hi: f64) -> Result<Self, SetError> {
        Self::new(lo, hi, true, false)
    }

    /// `(lo, hi]`
    pub fn left_open(lo: f64, hi: f64) -> Result<Self, SetError> {
        Self::new(lo, hi, false, true)
    }

    pub fn point(x: f64) -> Result<Self, SetError> {
        Self::closed(x, x)
    }

    pub fn measure(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && !(self.lo_closed && self.hi_closed)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }
}

/// An axis-aligned box, one `[lo, hi]` pair per coordinate.
///
/// Inside an NSet a box with all sides of positive length is read as the
/// half-open product `Π [lo, hi)`; a box with some side of zero length is
/// read as the closed product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AxisBox {
    sides: Vec<[f64; 2]>,
}

impl AxisBox {
    pub fn sides(&self) -> &[[f64; 2]] {
        &self.sides
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().map(|[lo, hi]| hi - lo).product()
    }

    fn is_degenerate(&self) -> bool {
        self.sides.iter().any(|[lo, hi]| lo == hi)
    }

    fn contains_half_open(&self, x: &[f64]) -> bool {
        self.sides.iter().zip(x).all(|([lo, hi], &v)| *lo <= v && v < *hi)
    }

    fn contains_closed(&self, x: &[f64]) -> bool {
        self.sides.iter().zip(x).all(|([lo, hi], &v)| *lo <= v && v <= *hi)
    }

    /// Whether the closed box `inner` lies inside this half-open box.
    fn covers_closed(&self, inner: &AxisBox) -> bool {
        self.sides
            .iter()
            .zip(&inner.sides)
            .all(|([lo, hi], [ilo, ihi])| lo <= ilo && ihi < hi)
    }
}

fn cmp_sides(a: &[[f64; 2]], b: &[[f64; 2]]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1]));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Union,
    Intersect,
    Difference,
    SymDiff,
}

impl Op {
    fn keep(self, in_a: bool, in_b: bool) -> bool {
        match self {
            Op::Union => in_a || in_b,
            Op::Intersect => in_a && in_b,
            Op::Difference => in_a && !in_b,
            Op::SymDiff => in_a != in_b,
        }
    }
}

type Tail = Vec<[f64; 2]>;

/// Combine two lists of half-open boxes (given as side suffixes) under
/// `op`, returning the canonical disjoint decomposition of the result.
fn sweep(a: &[&[[f64; 2]]], b: &[&[[f64; 2]]], op: Op) -> Vec<Tail> {
    let at_leaf = a.first().or(b.first()).is_none_or(|s| s.is_empty());
    if at_leaf {
        return if op.keep(!a.is_empty(), !b.is_empty()) { vec![Vec::new()] } else { Vec::new() };
    }

    let mut cuts: Vec<f64> = a.iter().chain(b).flat_map(|s| [s[0][0], s[0][1]]).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    // (slab lo, slab hi, cross-section)
    let mut slabs: Vec<(f64, f64, Vec<Tail>)> = Vec::new();
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let covering = |s: &&&[[f64; 2]]| s[0][0] <= t0 && s[0][1] >= t1;
        let sa: Vec<&[[f64; 2]]> = a.iter().filter(covering).map(|s| &s[1..]).collect();
        let sb: Vec<&[[f64; 2]]> = b.iter().filter(covering).map(|s| &s[1..]).collect();
        let skip = match op {
            Op::Union | Op::SymDiff => sa.is_empty() && sb.is_empty(),
            Op::Intersect => sa.is_empty() || sb.is_empty(),
            Op::Difference => sa.is_empty(),
        };
        if skip {
            continue;
        }
        let section = sweep(&sa, &sb, op);
        if section.is_empty() {
            continue;
        }
        match slabs.last_mut() {
            Some((_, hi, prev)) if *hi == t0 && *prev == section => *hi = t1,
            _ => slabs.push((t0, t1, section)),
        }
    }

    let mut out = Vec::new();
    for (lo, hi, section) in slabs {
        for tail in section {
            let mut sides = Vec::with_capacity(tail.len() + 1);
            sides.push([lo, hi]);
            sides.extend(tail);
            out.push(sides);
        }
    }
    out
}

/// A finite union of axis-aligned boxes in `dim` dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNSet", into = "RawNSet")]
pub struct NSet {
    dim: usize,
    parts: Vec<AxisBox>,
    degenerate: Vec<AxisBox>,
}

#[derive(Serialize, Deserialize)]
struct RawNSet {
    dim: usize,
    parts: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<RawNSet> for NSet {
    type Error = SetError;

    fn try_from(raw: RawNSet) -> Result<Self, SetError> {
        NSet::from_boxes(raw.dim, raw.parts)
    }
}

impl From<NSet> for RawNSet {
    fn from(set: NSet) -> Self {
        RawNSet {
            dim: set.dim,
            parts: set.parts.into_iter().chain(set.degenerate).map(|b| b.sides).collect(),
        }
    }
}

impl NSet {
    pub fn empty(dim: usize) -> Result<Self, SetError> {
        if dim == 0 {
            return Err(SetError::ZeroDimension);
        }
        Ok(NSet { dim, parts: Vec::new(), degenerate: Vec::new() })
    }

    /// Build a set from boxes given as `[lo, hi]` sides.
    ///
    /// Sides with `lo < hi` are read as `[lo, hi)`; a side with `lo == hi`
    /// makes the whole box a closed degenerate part.
    pub fn from_boxes<I>(dim: usize, boxes: I) -> Result<Self, SetError>
    where
        I: IntoIterator<Item = Vec<[f64; 2]>>,
    {
        if dim == 0 {
            return Err(SetError::ZeroDimension);
        }
        let mut parts = Vec::new();
        let mut degenerate = Vec::new();
        for sides in boxes {
            if sides.len() != dim {
                return Err(SetError::PartArity { expected: dim, found: sides.len() });
            }
            for &[lo, hi] in &sides {
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(SetError::NonFiniteBound);
                }
                if lo > hi {
                    return Err(SetError::InvertedInterval { lo, hi });
                }
            }
            let b = AxisBox { sides };
            if b.is_degenerate() {
                degenerate.push(b);
            } else {
                parts.push(b);
            }
        }
        let parts = canonical_parts(&parts);
        let degenerate = canonical_degenerate(degenerate, &parts);
        Ok(NSet { dim, parts, degenerate })
    }

    /// The product of one interval per coordinate.
    pub fn cuboid(sides: &[Interval]) -> Result<Self, SetError> {
        if sides.iter().any(Interval::is_empty) {
            return Self::empty(sides.len());
        }
        Self::from_boxes(sides.len(), [sides.iter().map(|i| [i.lo, i.hi]).collect()])
    }

    /// A single half-open box `Π [lo, hi)`.
    pub fn from_box(sides: &[[f64; 2]]) -> Result<Self, SetError> {
        Self::from_boxes(sides.len(), [sides.to_vec()])
    }

    pub fn interval(i: Interval) -> Result<Self, SetError> {
        Self::cuboid(&[i])
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Result<Self, SetError> {
        Self::from_boxes(
            1,
            intervals.into_iter().filter(|i| !i.is_empty()).map(|i| vec![[i.lo, i.hi]]),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Positive-volume parts in canonical order.
    pub fn parts(&self) -> &[AxisBox] {
        &self.parts
    }

    /// Closed measure-zero parts not already covered by [`Self::parts`].
    pub fn degenerate_parts(&self) -> &[AxisBox] {
        &self.degenerate
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty() && self.degenerate.is_empty()
    }

    /// Lebesgue measure: the summed volume of the disjoint parts.
    pub fn measure(&self) -> f64 {
        self.parts.iter().map(AxisBox::volume).sum()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && (self.parts.iter().any(|b| b.contains_half_open(x))
                || self.degenerate.iter().any(|b| b.contains_closed(x)))
    }

    /// Smallest box containing every part, if the set is nonempty.
    pub fn hull(&self) -> Option<Vec<[f64; 2]>> {
        let mut all = self.parts.iter().chain(&self.degenerate);
        let first = all.next()?;
        let mut hull = first.sides.clone();
        for b in all {
            for (h, s) in hull.iter_mut().zip(&b.sides) {
                h[0] = h[0].min(s[0]);
                h[1] = h[1].max(s[1]);
            }
        }
        Some(hull)
    }

    fn check_dim(&self, other: &NSet) -> Result<(), SetError> {
        if self.dim != other.dim {
            return Err(SetError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    fn combine(&self, other: &NSet, op: Op) -> Result<NSet, SetError> {
        self.check_dim(other)?;
        let a: Vec<&[[f64; 2]]> = self.parts.iter().map(|b| b.sides.as_slice()).collect();
        let b: Vec<&[[f64; 2]]> = other.parts.iter().map(|b| b.sides.as_slice()).collect();
        let parts: Vec<AxisBox> = sweep(&a, &b, op).into_iter().map(|sides| AxisBox { sides }).collect();

        let a_only = || self.degenerate.iter().filter(|d| !other.covers_degenerate(d)).cloned();
        let b_only = || other.degenerate.iter().filter(|d| !self.covers_degenerate(d)).cloned();
        let candidates: Vec<AxisBox> = match op {
            Op::Union => self.degenerate.iter().chain(&other.degenerate).cloned().collect(),
            Op::Intersect => self
                .degenerate
                .iter()
                .filter(|d| other.covers_degenerate(d))
                .chain(other.degenerate.iter().filter(|d| self.covers_degenerate(d)))
                .cloned()
                .collect(),
            Op::Difference => a_only().collect(),
            Op::SymDiff => a_only().chain(b_only()).collect(),
        };
        let degenerate = canonical_degenerate(candidates, &parts);
        Ok(NSet { dim: self.dim, parts, degenerate })
    }

    fn covers_degenerate(&self, d: &AxisBox) -> bool {
        self.parts.iter().any(|p| p.covers_closed(d)) || self.degenerate.iter().any(|e| e == d)
    }

    pub fn union(&self, other: &NSet) -> Result<NSet, SetError> {
        self.combine(other, Op::Union)
    }

    pub fn intersect(&self, other: &NSet) -> Result<NSet, SetError> {
        self.combine(other, Op::Intersect)
    }

    pub fn difference(&self, other: &NSet) -> Result<NSet, SetError> {
        self.combine(other, Op::Difference)
    }

    pub fn symdiff(&self, other: &NSet) -> Result<NSet, SetError> {
        self.combine(other, Op::SymDiff)
    }

    pub fn is_subset(&self, other: &NSet) -> Result<bool, SetError> {
        Ok(self.difference(other)?.is_empty())
    }
}

fn canonical_parts(parts: &[AxisBox]) -> Vec<AxisBox> {
    let a: Vec<&[[f64; 2]]> = parts.iter().map(|b| b.sides.as_slice()).collect();
    sweep(&a, &[], Op::Union).into_iter().map(|sides| AxisBox { sides }).collect()
}

fn canonical_degenerate(mut deg: Vec<AxisBox>, parts: &[AxisBox]) -> Vec<AxisBox> {
    deg.retain(|d| !parts.iter().any(|p| p.covers_closed(d)));
    deg.sort_by(|x, y| cmp_sides(&x.sides, &y.sides));
    deg.dedup();
    deg
}

/// A finite set of labelled points (the range of a discrete variable).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscreteSet<T: Ord> {
    elements: BTreeSet<T>,
}

impl<T: Ord + Clone> DiscreteSet<T> {
    pub fn new() -> Self {
        DiscreteSet { elements: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.contains(x)
    }

    pub fn insert(&mut self, x: T) -> bool {
        self.elements.insert(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.elements.iter()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.elements.union(&other.elements).cloned().collect()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.elements.intersection(&other.elements).cloned().collect()
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.elements.difference(&other.elements).cloned().collect()
    }

    pub fn symdiff(&self, other: &Self) -> Self {
        self.elements.symmetric_difference(&other.elements).cloned().collect()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.elements.is_subset(&other.elements)
    }
}

impl<T: Ord> FromIterator<T> for DiscreteSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        DiscreteSet { elements: iter.into_iter().collect() }
    }
}

impl<T: Ord> IntoIterator for DiscreteSet<T> {
    type Item = T;
    type IntoIter = alloc::collections::btree_set::IntoIter<T>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(lo: f64, hi: f64) -> NSet {
        NSet::interval(Interval::closed(lo, hi).unwrap()).unwrap()
    }

    fn sides(set: &NSet) -> Vec<Vec<[f64; 2]>> {
        set.parts().iter().map(|b| b.sides().to_vec()).collect()
    }

    #[test]
    fn union_of_height_ranges() {
        let u = closed(90.0, 160.0).union(&closed(140.0, 260.0)).unwrap();
        assert_eq!(sides(&u), vec![vec![[90.0, 260.0]]]);
        assert_eq!(u.measure(), 170.0);
    }

    #[test]
    fn union_identity_and_overlap_merge() {
        let a = closed(0.0, 1.0);
        assert_eq!(a.union(&NSet::empty(1).unwrap()).unwrap(), a);
        let m = a.union(&closed(0.5, 2.0)).unwrap();
        assert_eq!(sides(&m), vec![vec![[0.0, 2.0]]]);
    }

    #[test]
    fn adjacent_half_open_intervals_merge() {
        let s = NSet::from_intervals([
            Interval::half_open(1.0, 2.0).unwrap(),
            Interval::half_open(0.0, 1.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(sides(&s), vec![vec![[0.0, 2.0]]]);
    }

    #[test]
    fn intersection_of_height_ranges() {
        let i = closed(90.0, 160.0).intersect(&closed(140.0, 260.0)).unwrap();
        assert_eq!(sides(&i), vec![vec![[140.0, 160.0]]]);
        let a = closed(3.0, 7.0);
        assert!(a.intersect(&NSet::empty(1).unwrap()).unwrap().is_empty());
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn symdiff_of_height_ranges() {
        let d = closed(90.0, 160.0).symdiff(&closed(140.0, 260.0)).unwrap();
        assert_eq!(sides(&d), vec![vec![[90.0, 140.0]], vec![[160.0, 260.0]]]);
        assert_eq!(d.measure(), 150.0);
        let a = closed(3.0, 7.0);
        assert!(a.symdiff(&a).unwrap().is_empty());
        assert_eq!(a.symdiff(&NSet::empty(1).unwrap()).unwrap(), a);
    }

    #[test]
    fn measure_of_empty_is_zero() {
        assert_eq!(NSet::empty(3).unwrap().measure(), 0.0);
    }

    #[test]
    fn membership_honours_half_open_convention() {
        assert!(closed(90.0, 160.0).contains(&[150.0]));
        assert!(!NSet::empty(1).unwrap().contains(&[0.0]));
        let d = NSet::from_intervals([
            Interval::half_open(90.0, 140.0).unwrap(),
            Interval::left_open(160.0, 260.0).unwrap(),
        ])
        .unwrap();
        assert!(!d.contains(&[140.0]));
        assert!(d.contains(&[139.999]));
        assert!(!d.contains(&[150.0]));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = closed(0.0, 1.0);
        let b = NSet::from_box(&[[0.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(a.union(&b), Err(SetError::DimensionMismatch { left: 1, right: 2 }));
        assert!(a.intersect(&b).is_err());
        assert!(a.difference(&b).is_err());
        assert!(a.symdiff(&b).is_err());
    }

    #[test]
    fn bad_bounds_are_rejected() {
        assert!(Interval::closed(2.0, 1.0).is_err());
        assert!(Interval::closed(f64::NAN, 1.0).is_err());
        assert!(NSet::from_boxes(2, [vec![[0.0, 1.0]]]).is_err());
        assert_eq!(NSet::empty(0), Err(SetError::ZeroDimension));
    }

    #[test]
    fn degenerate_boxes_have_no_measure_but_contain_points() {
        let p = NSet::interval(Interval::point(5.0).unwrap()).unwrap();
        assert_eq!(p.measure(), 0.0);
        assert!(p.contains(&[5.0]));
        assert!(!p.is_empty());
        let with_box = p.union(&closed(0.0, 10.0)).unwrap();
        assert!(with_box.degenerate_parts().is_empty());
        let edge = NSet::interval(Interval::point(10.0).unwrap()).unwrap();
        let u = closed(0.0, 10.0).union(&edge).unwrap();
        assert!(u.contains(&[10.0]));
        assert_eq!(u.measure(), 10.0);
        let segment = NSet::from_box(&[[0.0, 2.0], [1.0, 1.0]]).unwrap();
        assert!(segment.contains(&[2.0, 1.0]));
        assert_eq!(segment.measure(), 0.0);
    }

    #[test]
    fn two_dimensional_disjointification() {
        // two unit-offset 2x2 squares
        let a = NSet::from_box(&[[0.0, 2.0], [0.0, 2.0]]).unwrap();
        let b = NSet::from_box(&[[1.0, 3.0], [1.0, 3.0]]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.measure(), 7.0);
        assert_eq!(a.intersect(&b).unwrap().measure(), 1.0);
        assert_eq!(a.symdiff(&b).unwrap().measure(), 6.0);
        let parts = u.parts();
        for (i, p) in parts.iter().enumerate() {
            for q in &parts[i + 1..] {
                let overlap = p
                    .sides()
                    .iter()
                    .zip(q.sides())
                    .all(|(s, t)| s[0].max(t[0]) < s[1].min(t[1]));
                assert!(!overlap);
            }
        }
    }

    #[test]
    fn equal_point_sets_are_structurally_equal() {
        let a = NSet::from_boxes(
            2,
            [vec![[0.0, 1.0], [0.0, 2.0]], vec![[1.0, 2.0], [0.0, 1.0]], vec![[1.0, 2.0], [1.0, 2.0]]],
        )
        .unwrap();
        let b = NSet::from_box(&[[0.0, 2.0], [0.0, 2.0]]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_shape() {
        let s = NSet::from_boxes(1, [vec![[0.0, 1.0]], vec![[2.0, 3.0]]]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"dim":1,"parts":[[[0.0,1.0]],[[2.0,3.0]]]}"#);
        let back: NSet = serde_json::from_str(r#"{"dim":1,"parts":[[[2,3]],[[0,1.5]],[[1,2]]]}"#).unwrap();
        assert_eq!(sides(&back), vec![vec![[0.0, 3.0]]]);
        assert!(serde_json::from_str::<NSet>(r#"{"dim":1,"parts":[[[3,2]]]}"#).is_err());
    }

    #[test]
    fn discrete_set_algebra() {
        let a: DiscreteSet<u32> = [1, 2, 3].into_iter().collect();
        let b: DiscreteSet<u32> = [3, 4].into_iter().collect();
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersect(&b).len(), 1);
        assert_eq!(a.symdiff(&b).len(), 3);
        assert_eq!(a.difference(&b).len(), 2);
        assert!(a.intersect(&b).is_subset(&a));
    }
}

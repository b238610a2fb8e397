//! Finite sample spaces with explicit uncertain variables.
//!
//! A [`FiniteWorld`] lists every sample `ω` together with the values of
//! the state `X`, the report `Y` and the hypothesis `H`. Ranges are
//! computed by enumeration, which makes the world a brute-force bench for
//! the set identities used elsewhere in the crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::nset::{DiscreteSet, NSet};

/// The two values of a binary hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hyp {
    #[serde(rename = "p0")]
    Null,
    #[serde(rename = "p1")]
    Alt,
}

impl Hyp {
    pub fn other(self) -> Hyp {
        match self {
            Hyp::Null => Hyp::Alt,
            Hyp::Alt => Hyp::Null,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Hyp::Null => "p0",
            Hyp::Alt => "p1",
        }
    }
}

impl fmt::Display for Hyp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value taken by a discrete uncertain variable.
///
/// Numbers compare by IEEE total order, so labels can live in ordered sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Num(f64),
    Text(String),
    Tuple(Vec<Label>),
}

impl Label {
    fn rank(&self) -> u8 {
        match self {
            Label::Num(_) => 0,
            Label::Text(_) => 1,
            Label::Tuple(_) => 2,
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Num(a), Label::Num(b)) => a.total_cmp(b),
            (Label::Text(a), Label::Text(b)) => a.cmp(b),
            (Label::Tuple(a), Label::Tuple(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Label {}

impl From<f64> for Label {
    fn from(v: f64) -> Self {
        Label::Num(v)
    }
}

impl From<i32> for Label {
    fn from(v: i32) -> Self {
        Label::Num(v as f64)
    }
}

impl From<&str> for Label {
    fn from(v: &str) -> Self {
        Label::Text(v.into())
    }
}

impl From<Hyp> for Label {
    fn from(h: Hyp) -> Self {
        Label::Text(h.as_str().into())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Num(v) => write!(f, "{v}"),
            Label::Text(s) => f.write_str(s),
            Label::Tuple(items) => {
                f.write_str("(")?;
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    X,
    Y,
    H,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WorldError {
    LengthMismatch { omega: usize, var: &'static str, len: usize },
    DuplicateSample(String),
    /// Two samples share an `X` value but disagree on a variable that must
    /// be a function of `X`.
    NotAFunctionOfX { var: &'static str, first: String, second: String },
    EmptySampleSpace,
    ValueNotAttained { given: Selector, value: String },
    MissingHypothesis(Hyp),
    RangeTooLarge { size: usize, cap: usize },
}

impl fmt::Display for WorldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldError::LengthMismatch { omega, var, len } => {
                write!(f, "{var} has {len} entries but omega has {omega}")
            }
            WorldError::DuplicateSample(w) => write!(f, "sample {w} appears twice in omega"),
            WorldError::NotAFunctionOfX { var, first, second } => write!(
                f,
                "{var} is not a function of X: samples {first} and {second} share X but differ in {var}"
            ),
            WorldError::EmptySampleSpace => f.write_str("sample space is empty"),
            WorldError::ValueNotAttained { given, value } => {
                write!(f, "{given:?} never takes the value {value}")
            }
            WorldError::MissingHypothesis(h) => {
                write!(f, "no sample carries hypothesis {h}; both hypotheses must be attained")
            }
            WorldError::RangeTooLarge { size, cap } => {
                write!(f, "range has {size} elements, enumeration cap is {cap}")
            }
        }
    }
}

impl core::error::Error for WorldError {}

/// An explicit finite sample space with variables `X`, `Y = g_Y(X)` and
/// `H = g_H(X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWorld", into = "RawWorld")]
pub struct FiniteWorld {
    omega: Vec<Label>,
    x: Vec<Label>,
    y: Vec<Label>,
    h: Vec<Hyp>,
}

#[derive(Serialize, Deserialize)]
struct RawWorld {
    omega: Vec<Label>,
    #[serde(rename = "X")]
    x: Vec<Label>,
    #[serde(rename = "Y")]
    y: Vec<Label>,
    #[serde(rename = "H")]
    h: Vec<Hyp>,
}

impl TryFrom<RawWorld> for FiniteWorld {
    type Error = WorldError;

    fn try_from(raw: RawWorld) -> Result<Self, WorldError> {
        FiniteWorld::new(raw.omega, raw.x, raw.y, raw.h)
    }
}

impl From<FiniteWorld> for RawWorld {
    fn from(w: FiniteWorld) -> Self {
        RawWorld { omega: w.omega, x: w.x, y: w.y, h: w.h }
    }
}

impl FiniteWorld {
    pub fn new(
        omega: Vec<Label>,
        x: Vec<Label>,
        y: Vec<Label>,
        h: Vec<Hyp>,
    ) -> Result<Self, WorldError> {
        let n = omega.len();
        for (var, len) in [("X", x.len()), ("Y", y.len()), ("H", h.len())] {
            if len != n {
                return Err(WorldError::LengthMismatch { omega: n, var, len });
            }
        }
        let mut seen = DiscreteSet::new();
        for w in &omega {
            if !seen.insert(w.clone()) {
                return Err(WorldError::DuplicateSample(format!("{w}")));
            }
        }
        // Y and H must factor through X.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| x[a].cmp(&x[b]).then(a.cmp(&b)));
        for pair in order.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if x[a] != x[b] {
                continue;
            }
            let var = if y[a] != y[b] {
                "Y"
            } else if h[a] != h[b] {
                "H"
            } else {
                continue;
            };
            return Err(WorldError::NotAFunctionOfX {
                var,
                first: format!("{}", omega[a]),
                second: format!("{}", omega[b]),
            });
        }
        Ok(FiniteWorld { omega, x, y, h })
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn omega(&self) -> &[Label] {
        &self.omega
    }

    pub fn x(&self) -> &[Label] {
        &self.x
    }

    pub fn y(&self) -> &[Label] {
        &self.y
    }

    pub fn h(&self) -> &[Hyp] {
        &self.h
    }

    fn value(&self, sel: Selector, k: usize) -> Label {
        match sel {
            Selector::X => self.x[k].clone(),
            Selector::Y => self.y[k].clone(),
            Selector::H => self.h[k].into(),
        }
    }

    /// `⟦V⟧ = {V(ω) : ω ∈ Ω}`
    pub fn marginal_range(&self, var: Selector) -> Result<DiscreteSet<Label>, WorldError> {
        if self.is_empty() {
            return Err(WorldError::EmptySampleSpace);
        }
        Ok((0..self.len()).map(|k| self.value(var, k)).collect())
    }

    /// `⟦target | given = value⟧ = {target(ω) : given(ω) = value}`
    pub fn conditional_range(
        &self,
        target: Selector,
        given: Selector,
        value: &Label,
    ) -> Result<DiscreteSet<Label>, WorldError> {
        let range: DiscreteSet<Label> = (0..self.len())
            .filter(|&k| self.value(given, k) == *value)
            .map(|k| self.value(target, k))
            .collect();
        if range.is_empty() {
            return Err(WorldError::ValueNotAttained { given, value: format!("{value}") });
        }
        Ok(range)
    }

    /// `⟦A, B⟧`, the set of jointly attained pairs.
    pub fn joint_range(&self, a: Selector, b: Selector) -> DiscreteSet<(Label, Label)> {
        (0..self.len()).map(|k| (self.value(a, k), self.value(b, k))).collect()
    }

    /// Unrelatedness by the product definition: `⟦A, B⟧ = ⟦A⟧ × ⟦B⟧`.
    pub fn is_unrelated(&self, a: Selector, b: Selector) -> bool {
        let (Ok(ra), Ok(rb)) = (self.marginal_range(a), self.marginal_range(b)) else {
            return true;
        };
        let joint = self.joint_range(a, b);
        // The joint range is always a subset of the product, so comparing
        // sizes suffices.
        joint.len() == ra.len() * rb.len()
    }

    /// Unrelatedness by the conditional criterion: `⟦A | b⟧ = ⟦A⟧` for
    /// every attained `b`.
    pub fn is_unrelated_conditional(&self, a: Selector, b: Selector) -> bool {
        let (Ok(ra), Ok(rb)) = (self.marginal_range(a), self.marginal_range(b)) else {
            return true;
        };
        let all = rb.iter().all(|v| self.conditional_range(a, b, v).is_ok_and(|c| c == ra));
        all
    }

    /// `⟦Y | p⟧`, the reports produced under hypothesis `p`.
    pub fn output_range_given(&self, p: Hyp) -> DiscreteSet<Label> {
        (0..self.len()).filter(|&k| self.h[k] == p).map(|k| self.y[k].clone()).collect()
    }

    /// `⟦H | ⟦X | y⟧⟧ = ⋃_{x ∈ ⟦X|y⟧} ⟦H | x⟧`, the hypotheses compatible
    /// with observing the report `y`.
    pub fn hypotheses_given_output(&self, y: &Label) -> Result<DiscreteSet<Hyp>, WorldError> {
        let xs = self.conditional_range(Selector::X, Selector::Y, y)?;
        Ok((0..self.len()).filter(|&k| xs.contains(&self.x[k])).map(|k| self.h[k]).collect())
    }
}

/// Rényi differential 0-entropy `h0 = ln μ(s)`; `-inf` for null sets.
pub fn differential_entropy0(s: &NSet) -> f64 {
    let m = s.measure();
    if m > 0.0 {
        libm::log(m)
    } else {
        f64::NEG_INFINITY
    }
}

/// Rényi 0-entropy `H0 = log2 |s|` of a finite range.
pub fn discrete_entropy0<T: Ord + Clone>(s: &DiscreteSet<T>) -> Result<f64, WorldError> {
    if s.is_empty() {
        return Err(WorldError::EmptySampleSpace);
    }
    Ok(libm::log2(s.len() as f64))
}

//! Binary hypothesis tests on uncertain measurements.
//!
//! The adversary observes a report `y ∈ ⟦Y⟧` and must decide between
//! `p0` and `p1`. Everything here depends only on the two conditional
//! output ranges `⟦Y|p0⟧` and `⟦Y|p1⟧`: an output is decidable exactly when
//! it lies in one of them but not the other, so no test can be correct on
//! more than their symmetric difference, and any test that never answers
//! against the evidence (a *consistent* test) is correct on all of it.
//!
//! Continuous ranges use [`NSet`] with natural-log measures; discrete ranges
//! use [`DiscreteSet`] with base-2 log cardinalities.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::nset::{DiscreteSet, NSet, SetError};
use crate::uvar::{FiniteWorld, Label, Selector, WorldError};

pub use crate::uvar::Hyp;

/// Default cap on `|⟦Y⟧|` for [`brute_force_optimum`].
pub const DEFAULT_ENUMERATION_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum TestError {
    Set(SetError),
    World(WorldError),
    EmptyConditionalRange(Hyp),
}

impl fmt::Display for TestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestError::Set(e) => write!(f, "{e}"),
            TestError::World(e) => write!(f, "{e}"),
            TestError::EmptyConditionalRange(h) => write!(f, "conditional range under {h} is empty"),
        }
    }
}

impl core::error::Error for TestError {}

impl From<SetError> for TestError {
    fn from(e: SetError) -> Self {
        TestError::Set(e)
    }
}

impl From<WorldError> for TestError {
    fn from(e: WorldError) -> Self {
        TestError::World(e)
    }
}

/// The set operations a range needs to take part in a test.
pub trait OutcomeSet: Clone + PartialEq {
    type Elem: ?Sized;

    fn union(&self, other: &Self) -> Result<Self, SetError>;
    fn intersect(&self, other: &Self) -> Result<Self, SetError>;
    fn difference(&self, other: &Self) -> Result<Self, SetError>;
    fn symdiff(&self, other: &Self) -> Result<Self, SetError>;
    fn contains(&self, e: &Self::Elem) -> bool;
    fn is_empty(&self) -> bool;
    /// Lebesgue measure or cardinality.
    fn size(&self) -> f64;
    /// `ln μ` for continuous sets, `log2 |·|` for discrete ones; `-inf` at 0.
    fn log_size(&self) -> f64;

    fn is_subset(&self, other: &Self) -> Result<bool, SetError> {
        Ok(self.difference(other)?.is_empty())
    }
}

impl OutcomeSet for NSet {
    type Elem = [f64];

    fn union(&self, other: &Self) -> Result<Self, SetError> {
        NSet::union(self, other)
    }
    fn intersect(&self, other: &Self) -> Result<Self, SetError> {
        NSet::intersect(self, other)
    }
    fn difference(&self, other: &Self) -> Result<Self, SetError> {
        NSet::difference(self, other)
    }
    fn symdiff(&self, other: &Self) -> Result<Self, SetError> {
        NSet::symdiff(self, other)
    }
    fn contains(&self, e: &[f64]) -> bool {
        NSet::contains(self, e)
    }
    fn is_empty(&self) -> bool {
        NSet::is_empty(self)
    }
    fn size(&self) -> f64 {
        self.measure()
    }
    fn log_size(&self) -> f64 {
        crate::uvar::differential_entropy0(self)
    }
}

impl<T: Ord + Clone> OutcomeSet for DiscreteSet<T> {
    type Elem = T;

    fn union(&self, other: &Self) -> Result<Self, SetError> {
        Ok(DiscreteSet::union(self, other))
    }
    fn intersect(&self, other: &Self) -> Result<Self, SetError> {
        Ok(DiscreteSet::intersect(self, other))
    }
    fn difference(&self, other: &Self) -> Result<Self, SetError> {
        Ok(DiscreteSet::difference(self, other))
    }
    fn symdiff(&self, other: &Self) -> Result<Self, SetError> {
        Ok(DiscreteSet::symdiff(self, other))
    }
    fn contains(&self, e: &T) -> bool {
        DiscreteSet::contains(self, e)
    }
    fn is_empty(&self) -> bool {
        DiscreteSet::is_empty(self)
    }
    fn size(&self) -> f64 {
        self.len() as f64
    }
    fn log_size(&self) -> f64 {
        if self.is_empty() {
            f64::NEG_INFINITY
        } else {
            libm::log2(self.len() as f64)
        }
    }
}

/// `⟦Y|p0⟧`, `⟦Y|p1⟧` and their union `⟦Y⟧`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalOutputRanges<S> {
    given_null: S,
    given_alt: S,
    all: S,
}

impl<S: OutcomeSet> ConditionalOutputRanges<S> {
    pub fn new(given_null: S, given_alt: S) -> Result<Self, TestError> {
        if given_null.is_empty() {
            return Err(TestError::EmptyConditionalRange(Hyp::Null));
        }
        if given_alt.is_empty() {
            return Err(TestError::EmptyConditionalRange(Hyp::Alt));
        }
        let all = given_null.union(&given_alt)?;
        Ok(ConditionalOutputRanges { given_null, given_alt, all })
    }

    pub fn given(&self, h: Hyp) -> &S {
        match h {
            Hyp::Null => &self.given_null,
            Hyp::Alt => &self.given_alt,
        }
    }

    pub fn all(&self) -> &S {
        &self.all
    }

    /// `⟦Y|p0⟧ ∩ ⟦Y|p1⟧`, where no test can be correct.
    pub fn overlap(&self) -> Result<S, SetError> {
        self.given_null.intersect(&self.given_alt)
    }

    /// `⟦Y|p0⟧ Δ ⟦Y|p1⟧`, where the hypothesis is determined by the output.
    pub fn decidable(&self) -> Result<S, SetError> {
        self.given_null.symdiff(&self.given_alt)
    }

    /// Which hypotheses are compatible with observing `y`, if `y ∈ ⟦Y⟧`.
    pub fn evidence(&self, y: &S::Elem) -> Option<Evidence> {
        match (self.given_null.contains(y), self.given_alt.contains(y)) {
            (true, true) => Some(Evidence::Ambiguous),
            (true, false) => Some(Evidence::Null),
            (false, true) => Some(Evidence::Alt),
            (false, false) => None,
        }
    }
}

impl ConditionalOutputRanges<DiscreteSet<Label>> {
    /// Read `⟦Y|p0⟧` and `⟦Y|p1⟧` off a finite world.
    pub fn from_world(w: &FiniteWorld) -> Result<Self, TestError> {
        let null = w.output_range_given(Hyp::Null);
        let alt = w.output_range_given(Hyp::Alt);
        for (h, r) in [(Hyp::Null, &null), (Hyp::Alt, &alt)] {
            if r.is_empty() {
                return Err(WorldError::MissingHypothesis(h).into());
            }
        }
        Self::new(null, alt)
    }
}

/// What an observation says about the hypothesis on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evidence {
    #[serde(rename = "p0")]
    Null,
    #[serde(rename = "p1")]
    Alt,
    Ambiguous,
}

/// A test's binary answer together with the three-valued evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Hyp,
    pub evidence: Evidence,
}

/// A total decision rule on `⟦Y⟧`, stored as the region answered with `p0`.
/// The rest of `⟦Y⟧` is answered with `p1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Test<S> {
    null_region: S,
    domain: S,
    tie_rule: Hyp,
}

impl<S: OutcomeSet> Test<S> {
    /// A test answering `p0` on `region ∩ ⟦Y⟧`.
    pub fn from_region(r: &ConditionalOutputRanges<S>, region: &S) -> Result<Self, SetError> {
        Ok(Test { null_region: region.intersect(&r.all)?, domain: r.all.clone(), tie_rule: Hyp::Null })
    }

    pub fn null_region(&self) -> &S {
        &self.null_region
    }

    /// The label a consistent construction used on the overlap.
    pub fn tie_rule(&self) -> Hyp {
        self.tie_rule
    }

    pub fn decide(&self, y: &S::Elem) -> Option<Hyp> {
        if self.null_region.contains(y) {
            Some(Hyp::Null)
        } else if self.domain.contains(y) {
            Some(Hyp::Alt)
        } else {
            None
        }
    }

    pub fn verdict(&self, r: &ConditionalOutputRanges<S>, y: &S::Elem) -> Option<Verdict> {
        Some(Verdict { decision: self.decide(y)?, evidence: r.evidence(y)? })
    }

    /// `T(y) = p_k` only if `y ∈ ⟦Y|p_k⟧`, for both `k`.
    pub fn is_consistent(&self, r: &ConditionalOutputRanges<S>) -> Result<bool, SetError> {
        let alt_region = self.domain.difference(&self.null_region)?;
        Ok(self.null_region.is_subset(&r.given_null)? && alt_region.is_subset(&r.given_alt)?)
    }
}

/// The consistent test answering `tie_rule` on the overlap.
pub fn consistent_test<S: OutcomeSet>(
    r: &ConditionalOutputRanges<S>,
    tie_rule: Hyp,
) -> Result<Test<S>, SetError> {
    let null_region = match tie_rule {
        Hyp::Null => r.given_null.clone(),
        Hyp::Alt => r.given_null.difference(&r.given_alt)?,
    };
    Ok(Test { null_region, domain: r.all.clone(), tie_rule })
}

/// `ℵ(T)`: outputs where the hypothesis is pinned down by `y` and `T(y)`
/// names it.
pub fn correct_set<S: OutcomeSet>(t: &Test<S>, r: &ConditionalOutputRanges<S>) -> Result<S, SetError> {
    let only_null = r.given_null.difference(&r.given_alt)?;
    let only_alt = r.given_alt.difference(&r.given_null)?;
    let alt_region = t.domain.difference(&t.null_region)?;
    t.null_region.intersect(&only_null)?.union(&alt_region.intersect(&only_alt)?)
}

/// `𝒫(T) = log size(ℵ(T))`.
pub fn performance<S: OutcomeSet>(t: &Test<S>, r: &ConditionalOutputRanges<S>) -> Result<f64, SetError> {
    Ok(correct_set(t, r)?.log_size())
}

/// `log size(⟦Y|p0⟧ Δ ⟦Y|p1⟧)`, an upper bound on every test's performance
/// that consistent tests attain.
pub fn performance_bound<S: OutcomeSet>(r: &ConditionalOutputRanges<S>) -> Result<f64, SetError> {
    Ok(r.decidable()?.log_size())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport<S> {
    pub aleph: S,
    #[serde(with = "crate::extreal")]
    pub performance: f64,
    #[serde(with = "crate::extreal")]
    pub bound: f64,
    /// `𝒫(T) − h0(Y)`
    #[serde(with = "crate::extreal")]
    pub normalized: f64,
}

pub fn report<S: OutcomeSet>(t: &Test<S>, r: &ConditionalOutputRanges<S>) -> Result<TestReport<S>, SetError> {
    let aleph = correct_set(t, r)?;
    let performance = aleph.log_size();
    let normalized = if performance == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        performance - r.all.log_size()
    };
    Ok(TestReport { aleph, performance, bound: performance_bound(r)?, normalized })
}

/// Result of enumerating every test on a finite world.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    /// Largest `|ℵ(T)|` over all tests.
    pub best: usize,
    /// A maximiser: the lexicographically smallest decision vector over
    /// `⟦Y⟧` in sorted order, with `p0 < p1`.
    pub witness: Vec<(Label, Hyp)>,
    pub tests_evaluated: u64,
}

impl BruteForce {
    pub fn performance(&self) -> f64 {
        if self.best == 0 {
            f64::NEG_INFINITY
        } else {
            libm::log2(self.best as f64)
        }
    }
}

/// Enumerate all `2^|⟦Y⟧|` tests, scoring each directly from the
/// definition `ℵ(T) = {y : ⟦H | ⟦X|y⟧⟧ = {T(y)}}`.
pub fn brute_force_optimum(w: &FiniteWorld, cap: usize) -> Result<BruteForce, TestError> {
    let outputs: Vec<Label> = w.marginal_range(Selector::Y)?.into_iter().collect();
    let n = outputs.len();
    if n > cap || n >= 64 {
        return Err(WorldError::RangeTooLarge { size: n, cap }.into());
    }
    // Some(h) when the output alone pins the hypothesis to h.
    let determined: Vec<Option<Hyp>> = outputs
        .iter()
        .map(|y| {
            let hs = w.hypotheses_given_output(y)?;
            Ok(if hs.len() == 1 { hs.iter().next().copied() } else { None })
        })
        .collect::<Result<_, WorldError>>()?;

    let total: u64 = 1 << n;
    let decision = |mask: u64, k: usize| {
        if (mask >> (n - 1 - k)) & 1 == 1 {
            Hyp::Alt
        } else {
            Hyp::Null
        }
    };
    let mut best = 0usize;
    let mut best_mask = 0u64;
    let mut first = true;
    for mask in 0..total {
        let correct = (0..n).filter(|&k| determined[k] == Some(decision(mask, k))).count();
        if first || correct > best {
            best = correct;
            best_mask = mask;
            first = false;
        }
    }
    let witness = outputs.into_iter().enumerate().map(|(k, y)| (y, decision(best_mask, k))).collect();
    Ok(BruteForce { best, witness, tests_evaluated: total })
}

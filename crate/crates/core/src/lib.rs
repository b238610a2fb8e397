//! Non-stochastic hypothesis testing and deterministic privacy policies.
//!
//! Quantities here are described by their *ranges* (the sets of values an
//! uncertain variable can take) rather than by distributions. The crate
//! provides:
//!
//! * [`nset`]: exact set algebra and Lebesgue measure over finite unions of
//!   half-open boxes, plus finite [`DiscreteSet`]s.
//! * [`uvar`]: a finite sample-space workbench for checking range identities
//!   by enumeration.
//! * [`hypotest`]: correct sets, performance, consistent tests and the
//!   symmetric-difference performance bound.
//! * [`expr`]: a small arithmetic language for boundary functions.
//! * [`privacy`]: strip-projection reporting policies with their ε-privacy
//!   and ρ-accuracy guarantees.
//! * [`metrics`]: histograms, mean shift and KL divergence used to judge
//!   the utility of sanitized data.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod expr;
pub mod extreal;
pub mod hypotest;
pub mod metrics;
pub mod nset;
pub mod privacy;
pub mod uvar;

pub use expr::{BoundaryExpr, EvalError, ParseError};
pub use hypotest::{
    consistent_test, correct_set, performance, performance_bound, ConditionalOutputRanges,
    Evidence, Hyp, OutcomeSet, Test, TestReport, Verdict,
};
pub use metrics::{Histogram2D, KlDirection, MetricsError, UtilityCurvePoint};
pub use nset::{AxisBox, DiscreteSet, Interval, NSet, SetError};
pub use privacy::{PolicyError, PolicyGuarantee, QuadratureParams, StripMeasure, StripPolicy};
pub use uvar::{FiniteWorld, Label, Selector, WorldError};

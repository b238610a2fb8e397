//! Privacy against a hypothesis-testing adversary.
//!
//! A reporting policy maps the private state `x` to a public report `y`.
//! Its privacy level is how far the adversary's best achievable test
//! performance falls below certainty over the whole output range:
//!
//! ```text
//! Priv = log size(⟦Y⟧) − log size(⟦Y|p0⟧ Δ ⟦Y|p1⟧)
//! ```
//!
//! and a policy is ε-private when `Priv ≥ ln ε`. Accuracy is the worst-case
//! perturbation: ρ-accurate means `sup ‖x − y‖ ≤ 1/ρ`.
//!
//! [`StripPolicy`] hides a hypothesis of the form `x_i ≥ g(x_{-i})` by
//! snapping every point within `1/ρ` of the boundary onto it. It is
//! ρ-accurate by construction and ε-private with
//! `ε = μ(box ∩ strip) / μ(box)`, which is computed here by quadrature.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{BoundaryExpr, EvalError, ParseError};
use crate::hypotest::OutcomeSet;
use crate::nset::{NSet, SetError};

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyError {
    Set(SetError),
    Parse(ParseError),
    Eval(EvalError),
    NotASingleBox,
    ProtectedIndexOutOfRange { index: usize, dim: usize },
    BoundaryUsesProtected { index: usize },
    InvalidRho(f64),
    UnsortedRho,
    DimensionMismatch { expected: usize, found: usize },
    ZeroMeasureDomain,
    /// The strip misses the domain box, so no ε in (0, 1] applies.
    EmptyStrip,
    NonFiniteBoundary,
    EpsilonOutOfRange(f64),
    EmptyRange,
    RangeMismatch,
    TooManyDimensions(usize),
}

impl fmt::Display for PolicyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyError::Set(e) => write!(f, "{e}"),
            PolicyError::Parse(e) => write!(f, "boundary expression: {e}"),
            PolicyError::Eval(e) => write!(f, "boundary evaluation: {e}"),
            PolicyError::NotASingleBox => f.write_str("policy domain must be a single box"),
            PolicyError::ProtectedIndexOutOfRange { index, dim } => {
                write!(f, "protected index {index} outside 1..={dim}")
            }
            PolicyError::BoundaryUsesProtected { index } => {
                write!(f, "boundary expression must not depend on the protected coordinate x{index}")
            }
            PolicyError::InvalidRho(r) => write!(f, "rho must be positive and finite, got {r}"),
            PolicyError::UnsortedRho => f.write_str("rho values must be sorted ascending"),
            PolicyError::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            PolicyError::ZeroMeasureDomain => f.write_str("policy domain has zero measure"),
            PolicyError::EmptyStrip => f.write_str("the strip does not meet the domain box"),
            PolicyError::NonFiniteBoundary => f.write_str("boundary is not finite inside the domain box"),
            PolicyError::EpsilonOutOfRange(e) => write!(f, "epsilon must lie in (0, 1], got {e}"),
            PolicyError::EmptyRange => f.write_str("output range is empty"),
            PolicyError::RangeMismatch => {
                f.write_str("output range is not the union of the conditional ranges")
            }
            PolicyError::TooManyDimensions(d) => write!(f, "{d} dimensions exceed the quasi-Monte Carlo limit"),
        }
    }
}

impl core::error::Error for PolicyError {}

impl From<SetError> for PolicyError {
    fn from(e: SetError) -> Self {
        PolicyError::Set(e)
    }
}

impl From<EvalError> for PolicyError {
    fn from(e: EvalError) -> Self {
        PolicyError::Eval(e)
    }
}

impl From<ParseError> for PolicyError {
    fn from(e: ParseError) -> Self {
        PolicyError::Parse(e)
    }
}

/// Knobs for [`StripPolicy::strip_measure`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureParams {
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Uniform panels each adaptive integration starts from.
    pub initial_panels: usize,
    /// Samples used to locate clamp crossings along the innermost axis.
    pub crossing_samples: usize,
    /// Points per replicate on the quasi-Monte Carlo path (dim > 3).
    pub qmc_points: usize,
    pub qmc_replicates: usize,
    pub seed: u64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            rel_tol: 1e-8,
            max_depth: 40,
            initial_panels: 16,
            crossing_samples: 256,
            qmc_points: 1 << 14,
            qmc_replicates: 8,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripMeasure {
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyGuarantee {
    pub epsilon: f64,
    pub rho: f64,
    pub strip_measure: f64,
    pub domain_measure: f64,
    pub quadrature_error_estimate: f64,
}

/// Snap-to-boundary reporting policy.
///
/// With `w = 1/ρ`, a point with `|x_i − g(x_{-i})| ≤ w` is reported as
/// `(g(x_{-i}), x_{-i})`; every other point is reported unchanged. `g` is
/// written over the full coordinate vector but may not read `x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StripPolicy {
    domain: Vec<[f64; 2]>,
    protected: usize,
    boundary: BoundaryExpr,
    rho: f64,
}

impl StripPolicy {
    /// `protected_index` is 1-based.
    pub fn new(
        domain: &NSet,
        protected_index: usize,
        boundary: BoundaryExpr,
        rho: f64,
    ) -> Result<Self, PolicyError> {
        let [part] = domain.parts() else {
            return Err(PolicyError::NotASingleBox);
        };
        if !domain.degenerate_parts().is_empty() {
            return Err(PolicyError::NotASingleBox);
        }
        let dim = domain.dim();
        if protected_index == 0 || protected_index > dim {
            return Err(PolicyError::ProtectedIndexOutOfRange { index: protected_index, dim });
        }
        if boundary.dim() != dim {
            return Err(PolicyError::DimensionMismatch { expected: dim, found: boundary.dim() });
        }
        if boundary.uses_var(protected_index - 1) {
            return Err(PolicyError::BoundaryUsesProtected { index: protected_index });
        }
        check_rho(rho)?;
        Ok(StripPolicy { domain: part.sides().to_vec(), protected: protected_index - 1, boundary, rho })
    }

    /// Convenience constructor from raw box sides and expression source.
    pub fn from_parts(
        domain: &[[f64; 2]],
        protected_index: usize,
        boundary: &str,
        rho: f64,
    ) -> Result<Self, PolicyError> {
        let domain = NSet::from_box(domain)?;
        let boundary = BoundaryExpr::parse(boundary, domain.dim())?;
        Self::new(&domain, protected_index, boundary, rho)
    }

    pub fn with_rho(&self, rho: f64) -> Result<Self, PolicyError> {
        check_rho(rho)?;
        Ok(StripPolicy { rho, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[[f64; 2]] {
        &self.domain
    }

    /// 1-based protected coordinate.
    pub fn protected_index(&self) -> usize {
        self.protected + 1
    }

    pub fn boundary(&self) -> &BoundaryExpr {
        &self.boundary
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `1/ρ`
    pub fn half_width(&self) -> f64 {
        1.0 / self.rho
    }

    pub fn domain_measure(&self) -> f64 {
        self.domain.iter().map(|[lo, hi]| hi - lo).product()
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.domain.iter().zip(x).all(|([lo, hi], v)| lo <= v && v <= hi)
    }

    fn check_point(&self, x: &[f64]) -> Result<(), PolicyError> {
        if x.len() != self.dim() {
            return Err(PolicyError::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }

    /// `g(x_{-i})`
    pub fn boundary_at(&self, x: &[f64]) -> Result<f64, PolicyError> {
        self.check_point(x)?;
        Ok(self.boundary.eval(x)?)
    }

    /// Apply the policy in place; returns whether the point fell in the
    /// strip and was projected onto the boundary.
    pub fn apply_in_place(&self, x: &mut [f64]) -> Result<bool, PolicyError> {
        let g = self.boundary_at(x)?;
        let xi = &mut x[self.protected];
        if (*xi - g).abs() <= self.half_width() {
            *xi = g;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, PolicyError> {
        let mut y = x.to_vec();
        self.apply_in_place(&mut y)?;
        Ok(y)
    }

    /// `μ(box ∩ strip)`.
    pub fn strip_measure(&self, quad: &QuadratureParams) -> Result<StripMeasure, PolicyError> {
        let w = self.half_width();
        let m = self.integrate_sections(quad, |g, lo, hi| (hi.min(g + w) - lo.max(g - w)).max(0.0))?;
        Ok(StripMeasure { value: m.value.clamp(0.0, self.domain_measure()), ..m })
    }

    /// Measure of the part of the box the policy leaves untouched.
    pub fn unchanged_measure(&self, quad: &QuadratureParams) -> Result<StripMeasure, PolicyError> {
        let w = self.half_width();
        let m = self.integrate_sections(quad, |g, lo, hi| {
            (hi.min(g - w) - lo).max(0.0) + (hi - lo.max(g + w)).max(0.0)
        })?;
        Ok(StripMeasure { value: m.value.clamp(0.0, self.domain_measure()), ..m })
    }

    /// ε from the strip measure over the domain measure.
    pub fn epsilon_guarantee(&self, quad: &QuadratureParams) -> Result<PolicyGuarantee, PolicyError> {
        let domain_measure = self.domain_measure();
        if domain_measure <= 0.0 {
            return Err(PolicyError::ZeroMeasureDomain);
        }
        let strip = self.strip_measure(quad)?;
        if strip.value <= 0.0 {
            return Err(PolicyError::EmptyStrip);
        }
        Ok(PolicyGuarantee {
            epsilon: (strip.value / domain_measure).min(1.0),
            rho: self.rho,
            strip_measure: strip.value,
            domain_measure,
            quadrature_error_estimate: strip.error_estimate,
        })
    }

    /// Integrate `section(g(x_{-i}), lo_i, hi_i)` over the free coordinates.
    fn integrate_sections<F>(&self, quad: &QuadratureParams, section: F) -> Result<StripMeasure, PolicyError>
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let free: Vec<usize> = (0..self.dim()).filter(|&k| k != self.protected).collect();
        let mut x: Vec<f64> = self.domain.iter().map(|[lo, hi]| 0.5 * (lo + hi)).collect();
        let integ = Integrand { policy: self, section: &section, free: &free };
        if free.len() <= 2 {
            let (value, error_estimate) = integ.nested(quad, 0, &mut x)?;
            Ok(StripMeasure { value, error_estimate })
        } else {
            integ.quasi_monte_carlo(quad, &mut x)
        }
    }
}

fn check_rho(rho: f64) -> Result<(), PolicyError> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(PolicyError::InvalidRho(rho))
    }
}

struct Integrand<'a, F> {
    policy: &'a StripPolicy,
    section: &'a F,
    free: &'a [usize],
}

impl<F: Fn(f64, f64, f64) -> f64> Integrand<'_, F> {
    fn section_at(&self, x: &[f64]) -> Result<f64, PolicyError> {
        let g = match self.policy.boundary.eval(x) {
            Ok(g) => g,
            Err(EvalError::NonFinite) => return Err(PolicyError::NonFiniteBoundary),
            Err(e) => return Err(e.into()),
        };
        let [lo, hi] = self.policy.domain[self.policy.protected];
        Ok((self.section)(g, lo, hi))
    }

    /// Nested adaptive Simpson over the free coordinates from `level` on.
    fn nested(&self, quad: &QuadratureParams, level: usize, x: &mut [f64]) -> Result<(f64, f64), PolicyError> {
        if level == self.free.len() {
            return Ok((self.section_at(x)?, 0.0));
        }
        let axis = self.free[level];
        let [a, b] = self.policy.domain[axis];
        let innermost = level + 1 == self.free.len();
        let cuts = if innermost { self.clamp_crossings(quad, axis, x)? } else { Vec::new() };

        let mut inner_err: f64 = 0.0;
        let mut f = |t: f64| -> Result<f64, PolicyError> {
            x[axis] = t;
            let (v, e) = self.nested(quad, level + 1, x)?;
            inner_err = inner_err.max(e);
            Ok(v)
        };
        let mut knots = vec![a];
        knots.extend(cuts.into_iter().filter(|&c| c > a && c < b));
        knots.push(b);
        let (value, err) = integrate_pieces(&mut f, &knots, quad)?;
        Ok((value, err + inner_err * (b - a)))
    }

    /// Points along `axis` where `g ± w` crosses the protected side's
    /// bounds, i.e. where the clamped section length has a kink.
    fn clamp_crossings(&self, quad: &QuadratureParams, axis: usize, x: &mut [f64]) -> Result<Vec<f64>, PolicyError> {
        let [a, b] = self.policy.domain[axis];
        let [lo, hi] = self.policy.domain[self.policy.protected];
        let w = self.policy.half_width();
        let offsets = [w - lo, w - hi, -w - lo, -w - hi];
        let mut g_at = |t: f64| -> Result<f64, PolicyError> {
            x[axis] = t;
            let g = self.policy.boundary.eval(x).map_err(|e| match e {
                EvalError::NonFinite => PolicyError::NonFiniteBoundary,
                e => e.into(),
            })?;
            Ok(g)
        };
        let n = quad.crossing_samples.max(2);
        let ts: Vec<f64> = (0..=n).map(|k| a + (b - a) * (k as f64) / (n as f64)).collect();
        let gs = ts.iter().map(|&t| g_at(t)).collect::<Result<Vec<_>, _>>()?;
        let mut cuts = Vec::new();
        for off in offsets {
            for k in 0..n {
                let (c0, c1) = (gs[k] + off, gs[k + 1] + off);
                if c0 == 0.0 {
                    cuts.push(ts[k]);
                } else if c0 * c1 < 0.0 {
                    let (mut l, mut r) = (ts[k], ts[k + 1]);
                    let sign_l = c0 > 0.0;
                    for _ in 0..200 {
                        let m = 0.5 * (l + r);
                        if m <= l || m >= r {
                            break;
                        }
                        if (g_at(m)? + off > 0.0) == sign_l {
                            l = m;
                        } else {
                            r = m;
                        }
                    }
                    cuts.push(0.5 * (l + r));
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        Ok(cuts)
    }

    /// Randomly shifted Halton points; the spread across replicates gives
    /// the error estimate.
    fn quasi_monte_carlo(&self, quad: &QuadratureParams, x: &mut [f64]) -> Result<StripMeasure, PolicyError> {
        const PRIMES: [u32; 24] =
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];
        if self.free.len() > PRIMES.len() {
            return Err(PolicyError::TooManyDimensions(self.policy.dim()));
        }
        let volume: f64 = self.free.iter().map(|&k| self.policy.domain[k]).map(|[lo, hi]| hi - lo).product();
        let mut rng = ChaCha8Rng::seed_from_u64(quad.seed);
        let reps = quad.qmc_replicates.max(2);
        let n = quad.qmc_points.max(1);
        let mut estimates = Vec::with_capacity(reps);
        for _ in 0..reps {
            let shift: Vec<f64> = self.free.iter().map(|_| rng.random::<f64>()).collect();
            let mut sum = 0.0;
            for k in 1..=n {
                for (d, &axis) in self.free.iter().enumerate() {
                    let u = radical_inverse(k as u64, PRIMES[d]) + shift[d];
                    let u = u - libm::floor(u);
                    let [lo, hi] = self.policy.domain[axis];
                    x[axis] = lo + (hi - lo) * u;
                }
                sum += self.section_at(x)?;
            }
            estimates.push(volume * sum / n as f64);
        }
        let mean = estimates.iter().sum::<f64>() / reps as f64;
        let var = estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (reps - 1) as f64;
        Ok(StripMeasure { value: mean, error_estimate: libm::sqrt(var / reps as f64) })
    }
}

fn radical_inverse(mut k: u64, base: u32) -> f64 {
    let base = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base) as f64 * scale;
        k /= base;
        scale *= inv;
    }
    out
}

/// Adaptive Simpson over consecutive `knots`, each piece starting from
/// `initial_panels` uniform panels. Returns (value, error estimate).
fn integrate_pieces<E>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    knots: &[f64],
    quad: &QuadratureParams,
) -> Result<(f64, f64), E> {
    let panels = quad.initial_panels.max(1);
    let mut grid = Vec::new();
    for piece in knots.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        for k in 0..panels {
            let lo = a + (b - a) * (k as f64) / (panels as f64);
            let hi = if k + 1 == panels { b } else { a + (b - a) * ((k + 1) as f64) / (panels as f64) };
            grid.push((lo, hi));
        }
    }
    // Coarse pass sets the absolute tolerance.
    let mut coarse = Vec::with_capacity(grid.len());
    let mut scale = 0.0;
    for &(a, b) in &grid {
        let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
        let s = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        scale += s.abs();
        coarse.push((fa, fm, fb, s));
    }
    let total_width = knots[knots.len() - 1] - knots[0];
    let tol = quad.rel_tol * scale.max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut err = 0.0;
    for (&(a, b), &(fa, fm, fb, s)) in grid.iter().zip(&coarse) {
        let share = if total_width > 0.0 { tol * (b - a) / total_width } else { tol };
        let (v, e) = simpson_step(f, a, b, fa, fm, fb, s, share, quad.max_depth)?;
        value += v;
        err += e;
    }
    Ok((value, err))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<E>(
    f: &mut impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64), E> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok((left + right + delta / 15.0, delta.abs() / 15.0));
    }
    let (lv, le) = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let (rv, re) = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok((lv + rv, le + re))
}

/// `Priv = log size(⟦Y⟧) − log size(⟦Y|p0⟧ Δ ⟦Y|p1⟧)`; `+inf` when the
/// symmetric difference is empty.
pub fn priv_measure<S: OutcomeSet>(all: &S, given_null: &S, given_alt: &S) -> Result<f64, PolicyError> {
    if all.is_empty() {
        return Err(PolicyError::EmptyRange);
    }
    if given_null.union(given_alt)? != *all {
        return Err(PolicyError::RangeMismatch);
    }
    let decidable = given_null.symdiff(given_alt)?;
    if decidable.size() == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(all.log_size() - decidable.log_size())
}

/// `Priv ≥ ln ε`
pub fn is_eps_private(priv_value: f64, eps: f64) -> Result<bool, PolicyError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(PolicyError::EpsilonOutOfRange(eps));
    }
    Ok(priv_value >= libm::log(eps))
}

/// Largest Euclidean distance between a point and its report.
pub fn measured_accuracy<'a, I>(p: &StripPolicy, points: I) -> Result<f64, PolicyError>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut worst: f64 = 0.0;
    for x in points {
        let y = p.apply(x)?;
        let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        worst = worst.max(libm::sqrt(d2));
    }
    Ok(worst)
}

pub fn is_rho_accurate<'a, I>(p: &StripPolicy, points: I) -> Result<bool, PolicyError>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    Ok(measured_accuracy(p, points)? <= p.half_width())
}

/// ε(ρ) over an ascending list of accuracy levels.
pub fn sweep_epsilon(
    template: &StripPolicy,
    rho_values: &[f64],
    quad: &QuadratureParams,
) -> Result<Vec<PolicyGuarantee>, PolicyError> {
    for &r in rho_values {
        check_rho(r)?;
    }
    if rho_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(PolicyError::UnsortedRho);
    }
    rho_values.iter().map(|&r| template.with_rho(r)?.epsilon_guarantee(quad)).collect()
}

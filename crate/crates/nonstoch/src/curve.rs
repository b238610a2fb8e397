//! Privacy/utility curve over a range of accuracy levels.

use nonstoch_core::metrics::{kl_divergence, mean_diff, Histogram2D, KlDirection, MetricsError, UtilityCurvePoint};
use nonstoch_core::privacy::StripPolicy;
use thiserror::Error;

use crate::dataio::{apply_rows, DataError, DataTable};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("histograms need a 2-dimensional policy, got {0}")]
    NotTwoDimensional(usize),
    #[error("rho list is empty")]
    EmptyRho,
}

/// One accuracy level: the curve point plus the histogram of the
/// sanitized table.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveStep {
    pub point: UtilityCurvePoint,
    pub histogram: Histogram2D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOptions {
    pub bins: [usize; 2],
    pub alpha: f64,
    pub direction: KlDirection,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { bins: [50, 50], alpha: 1e-9, direction: KlDirection::default() }
    }
}

/// Histogram of the complete rows of `t` over the policy box.
pub fn table_histogram(t: &DataTable, p: &StripPolicy, bins: [usize; 2]) -> Result<Histogram2D, CurveError> {
    let bounds = policy_bounds(p)?;
    let points: Vec<[f64; 2]> = (0..t.len()).filter_map(|r| t.point(r)).map(|x| [x[0], x[1]]).collect();
    Ok(Histogram2D::from_points(&points, bounds, bins)?)
}

fn policy_bounds(p: &StripPolicy) -> Result<[[f64; 2]; 2], CurveError> {
    match p.domain() {
        [a, b] => Ok([*a, *b]),
        d => Err(CurveError::NotTwoDimensional(d.len())),
    }
}

/// Sanitize at each `rho` and compare against the original table. Mean
/// shift is taken over the complete rows on the protected column.
pub fn utility_steps(
    t: &DataTable,
    template: &StripPolicy,
    rhos: &[f64],
    opts: &CurveOptions,
) -> Result<(Histogram2D, Vec<CurveStep>), CurveError> {
    if rhos.is_empty() {
        return Err(CurveError::EmptyRho);
    }
    let original = table_histogram(t, template, opts.bins)?;
    let i = template.protected_index() - 1;
    let complete: Vec<usize> = (0..t.len()).filter(|&r| t.point(r).is_some()).collect();
    let before: Vec<f64> = complete.iter().map(|&r| t.value(r, i).unwrap()).collect();
    let mut steps = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let p = template.with_rho(rho).map_err(DataError::from)?;
        let (s, report) = apply_rows(t, &p)?;
        let after: Vec<f64> = complete.iter().map(|&r| s.value(r, i).unwrap()).collect();
        let histogram = table_histogram(&s, &p, opts.bins)?;
        let kl = match opts.direction {
            KlDirection::OriginalToSanitized => kl_divergence(&original, &histogram, opts.alpha)?,
            KlDirection::SanitizedToOriginal => kl_divergence(&histogram, &original, opts.alpha)?,
        };
        let point = UtilityCurvePoint {
            rho,
            mean_diff: mean_diff(&before, &after)?,
            kl,
            rows_modified: report.rows_modified,
            rows_used: complete.len(),
        };
        steps.push(CurveStep { point, histogram });
    }
    Ok((original, steps))
}

pub fn utility_curve(
    t: &DataTable,
    template: &StripPolicy,
    rhos: &[f64],
    opts: &CurveOptions,
) -> Result<Vec<UtilityCurvePoint>, CurveError> {
    Ok(utility_steps(t, template, rhos, opts)?.1.into_iter().map(|s| s.point).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::generate_fixture;

    fn bmi() -> StripPolicy {
        StripPolicy::from_parts(&[[0.0, 200.0], [0.0, 250.0]], 1, "0.003 * x2^2", 1.0).unwrap()
    }

    #[test]
    fn histogram_counts_complete_rows() {
        let t = generate_fixture(7, 300);
        let h = table_histogram(&t, &bmi(), [50, 50]).unwrap();
        assert_eq!(h.total() as usize, t.complete_rows());
        assert_eq!(h.discarded(), 0);
    }

    #[test]
    fn curve_on_fixture() {
        let t = generate_fixture(11, 400);
        let pts = utility_curve(&t, &bmi(), &[0.05, 0.5, 5.0, 1e9], &CurveOptions::default()).unwrap();
        for p in &pts {
            assert!(p.kl >= 0.0);
            assert!(p.mean_diff.abs() <= p.rows_modified as f64 / p.rows_used as f64 / p.rho);
        }
        let last = pts.last().unwrap();
        assert_eq!((last.rows_modified, last.mean_diff, last.kl), (0, 0.0, 0.0));
        assert!(utility_curve(&t, &bmi(), &[], &CurveOptions::default()).is_err());
    }
}

use nonstoch_core::privacy::{
    is_eps_private, measured_accuracy, priv_measure, sweep_epsilon, QuadratureParams, StripPolicy,
};
use nonstoch_core::nset::{DiscreteSet, Interval, NSet};
use proptest::prelude::*;

const BMI_BOX: [[f64; 2]; 2] = [[0.0, 200.0], [0.0, 250.0]];

fn bmi(rho: f64) -> StripPolicy {
    StripPolicy::from_parts(&BMI_BOX, 1, "0.003 * x2^2", rho).unwrap()
}

/// Midpoint rule along the height axis; the weight-axis section of the
/// strip is an interval whose length is known in closed form.
fn riemann_strip(w: f64, step: f64) -> f64 {
    let n = (250.0 / step).round() as usize;
    let mut sum = 0.0;
    for k in 0..n {
        let h = (k as f64 + 0.5) * step;
        let g = 0.003 * h * h;
        let len = (g + w).min(200.0) - (g - w).max(0.0);
        sum += len.max(0.0);
    }
    sum * step
}

#[test]
fn strip_measure_matches_riemann_sum() {
    let quad = QuadratureParams::default();
    for w in [1.0, 10.0, 50.0] {
        let m = bmi(1.0 / w).strip_measure(&quad).unwrap().value;
        let oracle = riemann_strip(w, 1e-3);
        assert!((m - oracle).abs() <= 1e-6 * oracle, "w={w}: {m} vs {oracle}");
    }
}

#[test]
fn epsilon_times_rho_approaches_the_limit() {
    let quad = QuadratureParams::default();
    for rho in [10.0, 100.0, 1000.0] {
        let e = bmi(rho).epsilon_guarantee(&quad).unwrap().epsilon;
        assert!((e * rho - 0.01).abs() <= 0.02 * 0.01, "rho={rho}: {}", e * rho);
    }
}

#[test]
fn epsilon_decreases_along_a_log_sweep() {
    let rhos: Vec<f64> = (0..30).map(|k| 10f64.powf(-2.0 + 5.0 * k as f64 / 29.0)).collect();
    let sweep = sweep_epsilon(&bmi(1.0), &rhos, &QuadratureParams::default()).unwrap();
    for pair in sweep.windows(2) {
        assert!(pair[1].epsilon < pair[0].epsilon, "{pair:?}");
    }
    // Doubling the accuracy roughly halves ε once the strip is thin.
    let a = bmi(100.0).epsilon_guarantee(&QuadratureParams::default()).unwrap().epsilon;
    let b = bmi(200.0).epsilon_guarantee(&QuadratureParams::default()).unwrap().epsilon;
    assert!((a / b - 2.0).abs() < 0.05 * 2.0);
}

#[test]
fn linear_boundary_has_closed_form_strip() {
    // The strip never reaches the box sides, so its area is 2w times the height.
    let p = StripPolicy::from_parts(&[[-10.0, 110.0], [0.0, 100.0]], 1, "x2 / 2", 0.5).unwrap();
    let m = p.strip_measure(&QuadratureParams::default()).unwrap().value;
    assert!((m - 2.0 * 2.0 * 100.0).abs() < 1e-9);
}

#[test]
fn discrete_privacy_levels() {
    let s = |v: &[u8]| v.iter().copied().collect::<DiscreteSet<u8>>();
    // |⟦Y⟧| = 8, |Δ| = 2 → log2 4 = 2 bits.
    let p = priv_measure(&s(&[0, 1, 2, 3, 4, 5, 6, 7]), &s(&[0, 1, 2, 3, 4, 5, 6]), &s(&[1, 2, 3, 4, 5, 6, 7])).unwrap();
    assert!((p - 2.0).abs() < 1e-12);
    assert!(is_eps_private(p, 1.0).unwrap());
    // Equal conditional ranges give unbounded privacy.
    let same = s(&[3, 4]);
    assert_eq!(priv_measure(&same, &same, &same).unwrap(), f64::INFINITY);
    // Disjoint ranges give zero privacy; still ε-private for ε = 1 only.
    let p = priv_measure(&s(&[1, 2]), &s(&[1]), &s(&[2])).unwrap();
    assert_eq!(p, 0.0);
    assert!(is_eps_private(p, 1.0).unwrap());
    assert!(!is_eps_private(-0.5, 0.9).unwrap());
    assert!(is_eps_private(p, 0.0).is_err());
}

#[test]
fn continuous_privacy_level() {
    let c = |a, b| NSet::interval(Interval::closed(a, b).unwrap()).unwrap();
    let all = c(90.0, 260.0);
    let p = priv_measure(&all, &c(90.0, 160.0), &c(140.0, 260.0)).unwrap();
    assert!((p - (170f64 / 150.0).ln()).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reports_are_accurate_and_idempotent(w in 0.0f64..=200.0, h in 0.0f64..=250.0, rho in 0.005f64..5.0) {
        let p = bmi(rho);
        let x = [w, h];
        let once = p.apply(&x).unwrap();
        prop_assert_eq!(once[1], h);
        prop_assert!((once[0] - w).abs() <= 1.0 / rho);
        prop_assert_eq!(p.apply(&once).unwrap(), once.clone());
        prop_assert!(measured_accuracy(&p, [&x[..]]).unwrap() <= p.half_width());
    }

    #[test]
    fn strip_grows_with_width(r1 in 0.01f64..10.0, r2 in 0.01f64..10.0) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        let quad = QuadratureParams::default();
        let wide = bmi(lo).strip_measure(&quad).unwrap().value;
        let thin = bmi(hi).strip_measure(&quad).unwrap().value;
        prop_assert!(thin <= wide * (1.0 + 1e-9));
    }
}

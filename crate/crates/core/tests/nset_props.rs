use nonstoch_core::nset::{DiscreteSet, Interval, NSet};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn interval_list() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..10.0, 0.05f64..3.0).prop_map(|(a, len)| (a, a + len)), 0..10)
}

fn to_set(raw: &[(f64, f64)]) -> NSet {
    NSet::from_intervals(raw.iter().map(|&(a, b)| Interval::half_open(a, b).unwrap())).unwrap()
}

fn box_list() -> impl Strategy<Value = Vec<Vec<[f64; 2]>>> {
    let side = (0i32..8, 1i32..4).prop_map(|(a, len)| [a as f64 * 0.5, (a + len) as f64 * 0.5]);
    prop::collection::vec(prop::collection::vec(side, 2), 0..6)
}

/// Midpoint-grid count of points covered by any raw interval.
fn grid_measure(raw: &[(f64, f64)], lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut hit = vec![false; n];
    for &(a, b) in raw {
        let first = (((a - lo) / step) - 0.5).ceil().max(0.0) as usize;
        for (k, cell) in hit.iter_mut().enumerate().skip(first) {
            let x = lo + (k as f64 + 0.5) * step;
            if x >= b {
                break;
            }
            if x >= a {
                *cell = true;
            }
        }
    }
    hit.iter().filter(|&&h| h).count() as f64 * step
}

proptest! {
    #[test]
    fn symdiff_measure_identity(a in interval_list(), b in interval_list()) {
        let (a, b) = (to_set(&a), to_set(&b));
        let lhs = a.symdiff(&b).unwrap().measure();
        let rhs = a.measure() + b.measure() - 2.0 * a.intersect(&b).unwrap().measure();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn inclusion_exclusion(a in interval_list(), b in interval_list()) {
        let (a, b) = (to_set(&a), to_set(&b));
        let lhs = a.union(&b).unwrap().measure() + a.intersect(&b).unwrap().measure();
        prop_assert!((lhs - a.measure() - b.measure()).abs() < 1e-9);
    }

    #[test]
    fn symdiff_is_union_of_differences(a in box_list(), b in box_list()) {
        let a = NSet::from_boxes(2, a).unwrap();
        let b = NSet::from_boxes(2, b).unwrap();
        let direct = a.symdiff(&b).unwrap();
        let composed = a.difference(&b).unwrap().union(&b.difference(&a).unwrap()).unwrap();
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn two_dimensional_identities(a in box_list(), b in box_list()) {
        let a = NSet::from_boxes(2, a).unwrap();
        let b = NSet::from_boxes(2, b).unwrap();
        let i = a.intersect(&b).unwrap().measure();
        prop_assert!((a.symdiff(&b).unwrap().measure() - (a.measure() + b.measure() - 2.0 * i)).abs() < 1e-9);
        prop_assert!((a.union(&b).unwrap().measure() + i - a.measure() - b.measure()).abs() < 1e-9);
    }

    #[test]
    fn canonical_form_ignores_order(mut raw in box_list(), seed in any::<u64>()) {
        let a = NSet::from_boxes(2, raw.clone()).unwrap();
        // deterministic shuffle
        let n = raw.len();
        if n > 1 {
            for k in 0..n {
                let j = (seed.rotate_left(k as u32) as usize) % n;
                raw.swap(k, j);
            }
        }
        let b = NSet::from_boxes(2, raw).unwrap();
        prop_assert_eq!(&a, &b);
        // Re-canonicalising is a no-op.
        let again = NSet::from_boxes(2, a.parts().iter().map(|p| p.sides().to_vec())).unwrap();
        prop_assert_eq!(a, again);
    }

    #[test]
    fn measure_is_monotone(a in box_list(), b in box_list()) {
        let a = NSet::from_boxes(2, a).unwrap();
        let b = NSet::from_boxes(2, b).unwrap();
        let small = a.intersect(&b).unwrap();
        prop_assert!(small.is_subset(&a).unwrap());
        prop_assert!(small.measure() <= a.measure() + 1e-12);
        let big = a.union(&b).unwrap();
        prop_assert!(a.is_subset(&big).unwrap());
        prop_assert!(a.measure() <= big.measure() + 1e-12);
    }

    #[test]
    fn membership_agrees_with_raw_intervals(raw in interval_list(), x in 0.0f64..14.0) {
        let s = to_set(&raw);
        let expected = raw.iter().any(|&(a, b)| a <= x && x < b);
        prop_assert_eq!(s.contains(&[x]), expected);
    }

    #[test]
    fn discrete_cardinality_identity(a in prop::collection::btree_set(0u8..20, 0..12),
                                     b in prop::collection::btree_set(0u8..20, 0..12)) {
        let a: DiscreteSet<u8> = a.into_iter().collect();
        let b: DiscreteSet<u8> = b.into_iter().collect();
        prop_assert_eq!(a.symdiff(&b).len() + 2 * a.intersect(&b).len(), a.len() + b.len());
    }
}

#[test]
fn measure_matches_grid_oracle() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..200 {
        let raw = interval_list().new_tree(&mut runner).unwrap().current();
        let set = to_set(&raw);
        let Some(hull) = set.hull() else { continue };
        let [lo, hi] = hull[0];
        let oracle = grid_measure(&raw, lo, hi, 1e-4);
        let m = set.measure();
        assert!((m - oracle).abs() <= 1e-3 * m, "{m} vs grid {oracle}");
    }
}

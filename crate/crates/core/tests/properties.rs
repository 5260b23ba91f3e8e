use std::f64::consts::PI;

use proptest::prelude::*;

use pretzel_lo::boundary_path::wrap_phase;
use pretzel_lo::report::{to_json, Envelope, Query};
use pretzel_lo::representation::build_unchecked;
use pretzel_lo::{
    boundary_holonomy, cheb_eval, cheb_ratio, find_r1_star, solve_locus, PretzelKnot, Sign,
    SurgerySlope, ToleranceConfig,
};

fn corpus() -> impl Strategy<Value = PretzelKnot> {
    prop_oneof![
        Just([1, 1, 1]),
        Just([3, 3, 3]),
        Just([3, 3, 5]),
        Just([3, 5, 7]),
        Just([5, 5, 7]),
        Just([3, 7, 9]),
    ]
    .prop_map(|a| PretzelKnot::new(a[0], a[1], a[2]).unwrap())
}

/// `r1` in `(2, r1*)` given as a fraction of the interval.
fn elliptic_point(knot: &PretzelKnot, frac: f64) -> pretzel_lo::LocusPoint {
    let cfg = ToleranceConfig::default();
    let r1_star = find_r1_star(knot, &cfg).unwrap();
    solve_locus(knot, 2.0 + (r1_star - 2.0) * frac, &cfg).unwrap()
}

proptest! {
    #[test]
    fn negative_index_reflection(j in 0i64..20, z in -3.0f64..3.0) {
        prop_assert_eq!(cheb_eval(-j, z), -cheb_eval(j - 2, z));
    }

    #[test]
    fn recurrence(j in 1i64..15, z in -2.0f64..2.0) {
        let lhs = cheb_eval(j + 1, z);
        let rhs = z * cheb_eval(j, z) - cheb_eval(j - 1, z);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn ratio_matches_eval(k in 1u32..12, z in 2.0f64..6.0) {
        let p = cheb_ratio(k, z);
        let want = cheb_eval(k.into(), z) / cheb_eval(i64::from(k) - 1, z);
        prop_assert!((p.ratio().unwrap() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn locus_invariants(knot in corpus(), u in -6.0f64..1.0) {
        let point = solve_locus(&knot, 2.0 + 10f64.powf(u), &ToleranceConfig::default()).unwrap();
        let check = point.check();
        prop_assert!(check.passed(1e-9), "{:?}", check);
        // Equal twist counts give equal traces, up to the residual tolerance.
        let slack = 1e-9 * point.r1;
        prop_assert!(point.r2 <= point.r1 + slack && point.r3 <= point.r2 + slack);
        prop_assert!(point.r3 > 2.0);
    }

    #[test]
    fn locus_is_monotone(knot in corpus(), u in -5.0f64..0.5, step in 1e-3f64..0.5) {
        let cfg = ToleranceConfig::default();
        let r1 = 2.0 + 10f64.powf(u);
        let a = solve_locus(&knot, r1, &cfg).unwrap();
        let b = solve_locus(&knot, r1 * (1.0 + step), &cfg).unwrap();
        prop_assert!(b.r3 >= a.r3);
    }

    #[test]
    fn relation_residual_is_first_order(knot in corpus(), frac in 0.05f64..0.95) {
        let point = elliptic_point(&knot, frac);
        let base = build_unchecked(&point, Sign::Plus).unwrap().relation_residual;
        let small = build_unchecked(&point.perturbed(2, 1e-4), Sign::Plus).unwrap().relation_residual;
        let large = build_unchecked(&point.perturbed(2, 2e-4), Sign::Plus).unwrap().relation_residual;
        prop_assert!(base < 1e-9);
        let ratio = large / small;
        prop_assert!((1.8..2.2).contains(&ratio), "ratio {}", ratio);
    }

    #[test]
    fn holonomy_is_unit_and_consistent(knot in corpus(), frac in 0.0001f64..0.9999) {
        let point = elliptic_point(&knot, frac);
        for sign in [Sign::Plus, Sign::Minus] {
            let h = boundary_holonomy(&point, sign).unwrap();
            prop_assert!((h.longitude.norm() - 1.0).abs() < 1e-12);
            prop_assert!(h.phi > 0.0 && h.phi < PI);
            prop_assert!(h.eigenvalue_equation_residual(&point) < 1e-10);
            prop_assert!(h.closed_form_defect() < 1e-9);
            match sign {
                Sign::Plus => prop_assert!(h.slope < 0.0),
                Sign::Minus => prop_assert!(h.slope > 0.0 && h.slope < 1.0),
            }
        }
    }

    #[test]
    fn slope_display_round_trip(m in -1000i64..1000, l in 1i64..1000) {
        let s = SurgerySlope::new(m, l).unwrap();
        let back: SurgerySlope = s.to_string().parse().unwrap();
        prop_assert_eq!(s, back);
        prop_assert!((s.value() - m as f64 / l as f64).abs() < 1e-15 * (1.0 + s.value().abs()));
    }

    #[test]
    fn wrap_phase_range(x in -50.0f64..50.0) {
        let w = wrap_phase(x);
        prop_assert!(w > -PI && w <= PI);
        let turns = (x - w) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip(knot in corpus(), u in -6.0f64..1.0) {
        let cfg = ToleranceConfig::default();
        let point = solve_locus(&knot, 2.0 + 10f64.powf(u), &cfg).unwrap();
        let env = Envelope::new(knot, Query::Locus { r1: point.r1 }, point, Default::default(), cfg);
        let back: Envelope<pretzel_lo::LocusPoint> = serde_json::from_str(&to_json(&env)).unwrap();
        prop_assert_eq!(back, env);
    }
}

#[test]
fn slope_ranges_cover_both_intervals() {
    let cfg = ToleranceConfig::default();
    for a in [[1, 1, 1], [3, 3, 3], [3, 3, 5], [3, 5, 7]] {
        let knot = PretzelKnot::new(a[0], a[1], a[2]).unwrap();
        let rows = pretzel_lo::report::sample_path(&knot, 1000, &cfg)
            .unwrap()
            .rows;
        let neg: Vec<f64> = rows.iter().map(|r| r.slope_neg).collect();
        let pos: Vec<f64> = rows.iter().map(|r| r.slope_pos).collect();
        let max_neg = neg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min_neg = neg.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(
            min_neg < -50.0 && max_neg < 0.0,
            "{a:?}: [{min_neg}, {max_neg}]"
        );
        let min_pos = pos.iter().copied().fold(f64::INFINITY, f64::min);
        let max_pos = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        assert!(
            min_pos > 0.0 && max_pos < 1.0,
            "{a:?}: ({min_pos}, {max_pos})"
        );
        assert!(
            min_pos < 0.02 && max_pos > 0.98,
            "{a:?}: ({min_pos}, {max_pos})"
        );
    }
}

#[test]
fn cover_meridian_phase() {
    let cfg = ToleranceConfig::default();
    for (a, n) in [
        ([1, 1, 1], 7),
        ([3, 3, 3], 17),
        ([3, 3, 5], 23),
        ([3, 5, 7], 30),
    ] {
        let knot = PretzelKnot::new(a[0], a[1], a[2]).unwrap();
        let cert = pretzel_lo::realize_cover(&knot, n, &cfg).unwrap();
        assert!(cert.passed);
        let rep = pretzel_lo::build_representation(&cert.point, Sign::Plus, &cfg).unwrap();
        let phase = rep.meridian_phase().abs();
        assert!(
            (phase - PI / n as f64).abs() <= 1e-10,
            "{a:?} n = {n}: {phase}"
        );
    }
}

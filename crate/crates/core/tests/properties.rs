//! Property tests for the structural invariants.

use proptest::prelude::*;

use lambda_thermo_core::map::{self, CylinderWord, MapParams, StatePoint};
use lambda_thermo_core::measures;
use lambda_thermo_core::spectra::{self, OperatorKind, TruncatedOperator};

fn lambda_strategy() -> impl Strategy<Value = f64> {
    (0.02f64..0.98).prop_filter("away from the endpoints", |l| *l > 0.0 && *l < 1.0)
}

proptest! {
    #[test]
    fn partition_index_brackets_exactly(lam in lambda_strategy(), x in 1e-12f64..1.0) {
        let params = MapParams::new(lam).unwrap();
        let n = map::partition_index(x, &params).unwrap();
        let hi = lam.powi(n as i32 - 1);
        let lo = lam.powi(n as i32);
        prop_assert!(x > lo && x <= hi, "x={x} n={n} cell=({lo},{hi}]");
    }

    #[test]
    fn itineraries_are_admissible_and_step_preserves_encoding(
        lam in 0.1f64..0.9,
        x in 1e-9f64..1.0,
    ) {
        let params = MapParams::new(lam).unwrap();
        let pt = StatePoint::from_unit(x, &params).unwrap();
        let word = map::itinerary(pt, 40, &params).unwrap();
        prop_assert!(word.is_admissible());
        // every visited point satisfies the state-point invariants
        let mut cur = pt;
        for _ in 0..40 {
            prop_assert!(cur.state >= 1);
            prop_assert!(cur.rel > 0.0 && cur.rel <= 1.0);
            cur = map::step(cur, &params).unwrap();
        }
    }

    #[test]
    fn structured_apply_equals_dense(
        lam in 0.1f64..0.9,
        t in 0.1f64..3.0,
        k in 1usize..60,
        seed in any::<u64>(),
    ) {
        use lambda_thermo_core::stochastic::SplitMix64;
        let mut rng = SplitMix64::new(seed);
        for kind in [OperatorKind::A, OperatorKind::B, OperatorKind::AHat, OperatorKind::BHat, OperatorKind::D] {
            let op = TruncatedOperator::build(kind, k, lam, t).unwrap();
            let dense = op.to_dense();
            let w: Vec<f64> = (0..k).map(|_| rng.next_open01()).collect();
            let left = op.apply_left(&w);
            for j in 0..k {
                let want: f64 = (0..k).map(|i| w[i] * dense[i][j]).sum();
                prop_assert!((left[j] - want).abs() <= 1e-13 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn conformal_masses_positive_normalised_and_conformal(
        lam in 0.05f64..0.95,
        t in 0.05f64..4.0,
        excess in 0.0f64..0.8,
    ) {
        let p = measures::conformal_pressure(lam, t) + excess;
        let m = measures::conformal_measure(lam, t, p).unwrap();
        prop_assert!(m.is_positive());
        prop_assert!((m.total() - 1.0).abs() < 1e-12);
        let resid = measures::conformal_residual(&m, lam, t, p, 100);
        prop_assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn no_conformal_measure_below_the_pressure(
        lam in 0.05f64..0.95,
        t in 0.05f64..4.0,
        gap in 1e-6f64..0.5,
    ) {
        let p = measures::conformal_pressure(lam, t) - gap;
        prop_assert!(measures::conformal_measure(lam, t, p).is_err());
    }

    #[test]
    fn pressure_branches_are_consistent(lam in lambda_strategy(), t in -2.0f64..6.0) {
        let p = spectra::pressure_closed(lam, t);
        let u = lam.powf(t);
        // envelope for t >= 0
        if t >= 0.0 {
            prop_assert!(p <= 2.0f64.ln() * 2.0 + t * (1.0 - lam).ln() + 1e-12);
            prop_assert!(p >= 2.0f64.ln() * 2.0 + t * (lam * (1.0 - lam)).ln() - 1e-12);
        }
        // recurrent side matches log psi
        if u < 0.5 {
            let psi = spectra::psi(lam, t).unwrap();
            prop_assert!((p - psi.ln()).abs() < 1e-12 * p.abs().max(1.0));
        }
    }

    #[test]
    fn leading_root_is_monotone_in_k(lam in 0.1f64..0.9, t in 0.0f64..2.5) {
        let mut prev = 0.0f64;
        for k in [2usize, 4, 8, 16, 32] {
            let x = spectra::leading_root(OperatorKind::B, k, lam, t).unwrap();
            prop_assert!(x >= prev - 1e-13, "K={k}: {x} after {prev}");
            prev = x;
        }
        let limit = spectra::pressure_closed(lam, t).exp();
        prop_assert!(prev <= limit * (1.0 + 1e-10));
    }

    #[test]
    fn cylinder_words_admissibility_matches_rule(word in proptest::collection::vec(1u32..20, 1..10)) {
        let w = CylinderWord::new(word.clone());
        let manual = word.windows(2).all(|p| p[1] + 1 >= p[0]);
        prop_assert_eq!(w.is_admissible(), manual);
    }
}

//! Property-based invariants over random forms, metrics and parameters.

use closed_g2::exterior::{form_len, hodge_star, wedge, AlternatingForm, MetricData, DIM};
use closed_g2::g2::{i_phi, G2Point, SymmetricTwoTensor};
use closed_g2::growth::{comparison_volume, contradiction_predicate, euclidean_ball_volume, PinchingParams};
use proptest::prelude::*;

fn form(degree: usize) -> impl Strategy<Value = AlternatingForm> {
    prop::collection::vec(-1.0..1.0f64, form_len(degree))
        .prop_map(move |c| AlternatingForm::from_coeffs(degree, c).unwrap())
}

fn metric() -> impl Strategy<Value = MetricData> {
    prop::collection::vec(-0.5..0.5f64, DIM * DIM).prop_map(|b| {
        let g: [[f64; DIM]; DIM] = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..DIM).map(|k| b[k * DIM + i] * b[k * DIM + j]).sum::<f64>() + if i == j { 0.5 } else { 0.0 }
            })
        });
        MetricData::new(g).unwrap()
    })
}

fn symmetric() -> impl Strategy<Value = SymmetricTwoTensor> {
    prop::collection::vec(-1.0..1.0f64, DIM * DIM).prop_map(|v| {
        SymmetricTwoTensor::symmetrized(&std::array::from_fn(|i| std::array::from_fn(|j| v[i * DIM + j])))
    })
}

proptest! {
    #[test]
    fn wedge_graded_commutative(p in 0usize..=3, q in 0usize..=3, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = AlternatingForm::random(p, &mut rng);
        let b = AlternatingForm::random(q, &mut rng);
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap();
        let sign = if p * q % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((&ab - &ba.scaled(&sign)).max_abs() < 1e-13);
    }

    #[test]
    fn star_star_is_identity(m in metric(), k in 0usize..=DIM, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = AlternatingForm::random(k, &mut rng);
        let back = hodge_star(&hodge_star(&a, &m), &m);
        prop_assert!((&back - &a).max_abs() < 1e-9 * a.max_abs().max(1.0));
    }

    #[test]
    fn one_form_wedge_itself_vanishes(a in form(1)) {
        prop_assert!(wedge(&a, &a).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn two_form_split_reassembles(eta in form(2)) {
        let pt = G2Point::flat();
        let parts = pt.project_2form(&eta).unwrap();
        prop_assert!((&(&parts.seven + &parts.fourteen) - &eta).max_abs() < 1e-13);
        // Ω²₁₄: η∧φ = −∗η
        let m = MetricData::euclidean();
        let lhs = wedge(&parts.fourteen, pt.phi()).unwrap();
        prop_assert!((&lhs + &hodge_star(&parts.fourteen, &m)).max_abs() < 1e-13);
    }

    #[test]
    fn three_form_split_reassembles(gamma in form(3)) {
        let pt = G2Point::flat();
        let parts = pt.project_3form(&gamma).unwrap();
        let sum = &(&parts.one + &parts.seven) + &parts.twenty_seven;
        prop_assert!((&sum - &gamma).max_abs() < 1e-12);
    }

    #[test]
    fn i_phi_round_trip(h in symmetric()) {
        let pt = G2Point::flat();
        let back = pt.i_phi_inverse(&i_phi(&h, &pt)).unwrap();
        prop_assert!(back.sub(&h).max_abs() < 1e-12);
    }

    #[test]
    fn comparison_volume_dominates_euclidean(r in 1e-3..20.0f64, k in 1e-3..10.0f64) {
        let v = comparison_volume(r, k).unwrap();
        prop_assert!(v >= euclidean_ball_volume(r) * (1.0 - 1e-12));
        prop_assert!(comparison_volume(r * 1.01, k).unwrap() > v);
    }

    #[test]
    fn predicate_monotone_in_ratio(a in 0.01..1.0f64, b in 0.01..1.0f64, k2 in 0.01..100.0f64) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let plo = contradiction_predicate(&PinchingParams::from_ratio(lo, k2).unwrap());
        let phi = contradiction_predicate(&PinchingParams::from_ratio(hi, k2).unwrap());
        prop_assert!(!plo || phi);
    }

    #[test]
    fn pinching_rejects_bad_order(k1 in 0.0..10.0f64, k2 in 0.0..10.0f64) {
        let ok = PinchingParams::new(k1, k2).is_ok();
        prop_assert_eq!(ok, k1 > 0.0 && k1 <= k2);
    }
}

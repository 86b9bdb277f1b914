//! Torsion of gallery structures under exact symmetries.

use closed_g2::gallery::{flat_structure, gallery_chart, perturbed_closed, BetaSpec};
use closed_g2::torsion::{analyze, torsion_from_phi, FieldResiduals};

fn gallery(n: usize, t: f64) -> closed_g2::fields::TensorField {
    let beta = BetaSpec::default();
    perturbed_closed(&gallery_chart(&beta, n).unwrap(), &beta, t).unwrap()
}

#[test]
fn flat_structure_has_no_torsion_or_curvature() {
    let phi = flat_structure(&gallery_chart(&BetaSpec::default(), 8).unwrap()).unwrap();
    let a = analyze(&phi).unwrap();
    let res = FieldResiduals::compute(&a).unwrap();
    assert_eq!(res.torsion_scale, 0.0);
    for (name, _, v) in res.convergent() {
        assert_eq!(v, 0.0, "{name}");
    }
}

#[test]
fn scaling_phi_by_lambda_cubed() {
    // lengths scale by λ, so |T|² scales by λ^{-2}
    let phi = gallery(8, 0.05);
    let lambda: f64 = 2.0;
    let scaled = phi
        .map(phi.valence(), |v, out| {
            for (o, x) in out.iter_mut().zip(v) {
                *o = lambda.powi(3) * x;
            }
        })
        .unwrap();
    let a = torsion_from_phi(&phi).unwrap().norm_t2;
    let b = torsion_from_phi(&scaled).unwrap().norm_t2;
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((y * lambda * lambda - x).abs() <= 1e-10 * x.abs().max(1e-12));
    }
}

#[test]
fn torsion_is_nonzero_and_quadratic_in_amplitude() {
    let s1 = torsion_from_phi(&gallery(8, 0.02)).unwrap().norm_t2.max_abs();
    let s2 = torsion_from_phi(&gallery(8, 0.01)).unwrap().norm_t2.max_abs();
    assert!(s1 > 0.0);
    let ratio = s1 / s2;
    assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn scalar_curvature_vanishes_with_torsion() {
    let mut prev = f64::INFINITY;
    for t in [0.04, 0.02, 0.01, 0.005] {
        let a = analyze(&gallery(8, t)).unwrap();
        let r = a.curvature.scalar.max_abs();
        assert!(r < prev);
        prev = r;
    }
    assert!(prev < 1e-3);
}

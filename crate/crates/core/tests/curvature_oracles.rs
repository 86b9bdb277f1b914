//! Finite-difference calculus against closed-form answers.

#![allow(clippy::needless_range_loop)]

use closed_g2::exterior::{AlternatingForm, DIM};
use closed_g2::fields::{
    bianchi_residual, covariant_derivative, curvature, exterior_derivative, form_field_from_fn, levi_civita, riemann,
    Chart, TensorField, Valence,
};

const CENTER: [f64; DIM] = [0.1, -0.2, 0.15, 0.05, -0.1, 0.2, 0.0];

fn conformal_metric(chart: &Chart, factor: impl Fn(&[f64; DIM]) -> f64 + Sync) -> TensorField {
    TensorField::sample(chart, Valence::METRIC, [true; DIM], |x| {
        let s = factor(x);
        (0..DIM * DIM)
            .map(|c| if c / DIM == c % DIM { s } else { 0.0 })
            .collect()
    })
    .unwrap()
}

fn r2(x: &[f64; DIM]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn center_index() -> [usize; DIM] {
    [2; DIM]
}

/// Max error of `Ric − c g` and `R − 42 c'` at the block center.
fn einstein_error(h: f64, factor: impl Fn(&[f64; DIM]) -> f64 + Sync, einstein: f64) -> (f64, f64) {
    let chart = Chart::centered(5, h, CENTER).unwrap();
    let g = conformal_metric(&chart, &factor);
    let cd = curvature(&g).unwrap();
    assert_eq!(cd.ricci.point_count(), 1);
    let ric = cd.ricci.at(&center_index()).unwrap();
    let g0 = factor(&CENTER);
    let mut err: f64 = 0.0;
    for c in 0..DIM * DIM {
        let expected = if c / DIM == c % DIM { einstein * g0 } else { 0.0 };
        err = err.max((ric[c] - expected).abs());
    }
    let r = cd.scalar.at(&center_index()).unwrap()[0];
    (err, (r - 7.0 * einstein).abs())
}

#[test]
fn round_sphere_is_einstein() {
    let sphere = |x: &[f64; DIM]| 4.0 / (1.0 + r2(x)).powi(2);
    let (e1, s1) = einstein_error(0.1, sphere, 6.0);
    let (e2, s2) = einstein_error(0.05, sphere, 6.0);
    assert!(e2 < 0.01 * 6.0 * sphere(&CENTER) && s2 < 0.01 * 42.0, "{e2} {s2}");
    let ratio = e1 / e2;
    assert!((3.5..=4.5).contains(&ratio), "Ricci ratio {ratio}");
    let ratio = s1 / s2;
    assert!((3.5..=4.5).contains(&ratio), "scalar ratio {ratio}");
}

#[test]
fn hyperbolic_ball_is_einstein() {
    let k2 = 0.7;
    let ball = move |x: &[f64; DIM]| 4.0 / (1.0 - k2 * r2(x)).powi(2);
    let (e1, _) = einstein_error(0.1, ball, -6.0 * k2);
    let (e2, s2) = einstein_error(0.05, ball, -6.0 * k2);
    assert!(s2 < 0.5, "{s2}");
    let ratio = e1 / e2;
    assert!((3.5..=4.5).contains(&ratio), "Ricci ratio {ratio}");
}

/// Closed form for `g = e^{2 x1} δ`: `Γ^k_ij = δ_ki δ_j0 + δ_kj δ_i0 − δ_ij δ_k0`.
fn christoffel_error(h: f64) -> f64 {
    let chart = Chart::centered(5, h, CENTER).unwrap();
    let mut dep = [false; DIM];
    dep[0] = true;
    let g = TensorField::sample(&chart, Valence::METRIC, dep, |x| {
        let s = (2.0 * x[0]).exp();
        (0..DIM * DIM)
            .map(|c| if c / DIM == c % DIM { s } else { 0.0 })
            .collect()
    })
    .unwrap();
    let gamma = levi_civita(&g).unwrap();
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    gamma.max_over(|v| {
        let mut worst: f64 = 0.0;
        for k in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    let exact = d(k, i) * d(j, 0) + d(k, j) * d(i, 0) - d(i, j) * d(k, 0);
                    worst = worst.max((v[(k * DIM + i) * DIM + j] - exact).abs());
                }
            }
        }
        worst
    })
}

#[test]
fn conformal_christoffels_converge() {
    let (e1, e2) = (christoffel_error(0.1), christoffel_error(0.05));
    let ratio = e1 / e2;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

fn sine_form_error(h: f64) -> f64 {
    let chart = Chart::centered(5, h, CENTER).unwrap();
    let mut dep = [false; DIM];
    dep[0] = true;
    let f = form_field_from_fn(&chart, 2, dep, |x| {
        AlternatingForm::basis(&[1, 2]).unwrap().scaled(&x[0].sin())
    })
    .unwrap();
    let d = exterior_derivative(&f).unwrap();
    let i = AlternatingForm::<f64>::basis(&[0, 1, 2]).unwrap();
    let pos = i.coeffs().iter().position(|c| *c == 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for p in 0..d.point_count() {
        let x = chart.coordinate(0, d.grid_index_of(p)[0]);
        let v = d.point_values(p);
        for (c, val) in v.iter().enumerate() {
            let exact = if c == pos { x.cos() } else { 0.0 };
            worst = worst.max((val - exact).abs());
        }
    }
    worst
}

#[test]
fn exterior_derivative_of_sine_converges() {
    let ratio = sine_form_error(0.2) / sine_form_error(0.1);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

fn random_smooth_form(chart: &Chart, degree: usize) -> TensorField {
    form_field_from_fn(chart, degree, [true; DIM], |x| {
        let coeffs = (0..closed_g2::exterior::form_len(degree))
            .map(|c| {
                let c = c as f64;
                ((c + 1.0) * x[0] + 0.3 * c * x[3]).sin() * (0.7 * x[1] - 0.2 * c * x[6]).cos() + 0.1 * c * x[2] * x[5]
            })
            .collect();
        AlternatingForm::from_coeffs(degree, coeffs).unwrap()
    })
    .unwrap()
}

#[test]
fn d_squared_vanishes() {
    // Central differences along different axes commute, so d∘d vanishes to rounding.
    let chart = Chart::centered(5, 0.1, CENTER).unwrap();
    for k in [1, 2, 4] {
        let f = random_smooth_form(&chart, k);
        let dd = exterior_derivative(&exterior_derivative(&f).unwrap()).unwrap();
        assert!(dd.max_abs() < 1e-11, "degree {k}: {}", dd.max_abs());
    }
}

#[test]
fn metricity_and_bianchi_hold_to_rounding() {
    let chart = Chart::centered(5, 0.1, CENTER).unwrap();
    let g = conformal_metric(&chart, |x| 4.0 / (1.0 + r2(x)).powi(2));
    let gamma = levi_civita(&g).unwrap();
    let ng = covariant_derivative(&g, &gamma).unwrap();
    assert_eq!(ng.valence(), Valence::Tensor { up: 0, down: 3 });
    assert!(ng.max_abs() < 1e-12, "{}", ng.max_abs());
    let cd = curvature(&g).unwrap();
    let b = bianchi_residual(&riemann(&cd.christoffel).unwrap());
    assert!(b < 1e-10, "{b}");
}

#[test]
fn covariant_derivative_of_flat_phi_vanishes() {
    let chart = Chart::centered(5, 0.1, CENTER).unwrap();
    let id: Vec<f64> = (0..DIM * DIM)
        .map(|c| if c / DIM == c % DIM { 1.0 } else { 0.0 })
        .collect();
    let g = TensorField::constant(&chart, Valence::METRIC, &id).unwrap();
    let phi = TensorField::constant(&chart, Valence::Form(3), closed_g2::g2::standard_phi::<f64>().coeffs()).unwrap();
    let d = covariant_derivative(&phi, &levi_civita(&g).unwrap()).unwrap();
    assert_eq!(d.max_abs(), 0.0);
}

#[test]
fn translation_leaves_curvature_bitwise_unchanged() {
    let l = 2.0 * std::f64::consts::PI;
    let chart = Chart::periodic([8, 8, 5, 5, 5, 5, 5], [l; DIM]).unwrap();
    let mut dep = [false; DIM];
    dep[0] = true;
    dep[1] = true;
    let g = TensorField::sample(&chart, Valence::METRIC, dep, |x| {
        let s = 1.0 + 0.2 * x[0].sin() * x[1].cos();
        (0..DIM * DIM)
            .map(|c| if c / DIM == c % DIM { s } else { 0.0 })
            .collect()
    })
    .unwrap();
    let a = curvature(&g).unwrap();
    let b = curvature(&g.translated([0.37; DIM])).unwrap();
    assert_eq!(a.scalar.values(), b.scalar.values());
}

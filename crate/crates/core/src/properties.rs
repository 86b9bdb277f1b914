//! Randomised algebraic invariants gathered into one report.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::exterior::{
    form_inner, form_len, hodge_star, interior_product, volume_form, wedge, AlternatingForm, Mat7, MetricData, DIM,
};
use crate::fields::{exterior_derivative, form_field_from_fn, Chart};
use crate::g2::{i_phi, metric_from_phi, random_symmetric, standard_phi, G2Point, SymmetricTwoTensor};
use crate::report::{anchors, Check, VerificationReport, PLUMBING};

/// Relative tolerance for exterior-algebra and projector identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Relative tolerance for `i_φ` round trips and the image of `i_φ`.
pub const ROUND_TRIP_TOL: f64 = 1e-10;
/// Relative tolerance for the equivariance of the recovered metric.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;
/// Log-spread of singular values for random coordinate changes.
pub const SPREAD: f64 = 0.5;
/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropertyConfig {
    /// Random forms per identity.
    pub samples: usize,
    /// Random metrics for `∗∗ = id`.
    pub metrics: usize,
    /// Random coordinate changes for equivariance.
    pub transforms: usize,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        PropertyConfig {
            samples: 100,
            metrics: 20,
            transforms: 20,
        }
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

fn form_rel(a: &AlternatingForm, b: &AlternatingForm) -> f64 {
    rel((a - b).max_abs(), a.max_abs().max(b.max_abs()).max(1.0))
}

/// `Q₁ diag(e^{s u}) Q₂` with Haar-like orthogonal `Qᵢ`, `u` uniform in
/// `[−1, 1]`, and `det > 0`: singular values lie in `[e^{−s}, e^{s}]`.
pub fn random_orientation_preserving<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> Mat7<f64> {
    type M = nalgebra::SMatrix<f64, DIM, DIM>;
    let mut orthogonal = || M::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal)).qr().q();
    let (mut q1, q2) = (orthogonal(), orthogonal());
    if q1.determinant() * q2.determinant() < 0.0 {
        q1.column_mut(0).neg_mut();
    }
    let s = nalgebra::SVector::<f64, DIM>::from_fn(|_, _| (spread * rng.random_range(-1.0..=1.0)).exp());
    let a = q1 * M::from_diagonal(&s) * q2;
    std::array::from_fn(|i| std::array::from_fn(|j| a[(i, j)]))
}

/// `BᵀB + I/2`, a well-conditioned random metric.
pub fn random_metric<R: Rng + ?Sized>(rng: &mut R) -> MetricData {
    let b = nalgebra::SMatrix::<f64, DIM, DIM>::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal) * 0.5);
    let m = b.transpose() * b + nalgebra::SMatrix::<f64, DIM, DIM>::identity() * 0.5;
    MetricData::new(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))).expect("positive definite")
}

/// A positive 3-form `A^* φ₀` for a random orientation-preserving `A`.
pub fn random_positive_point<R: Rng + ?Sized>(rng: &mut R) -> G2Point {
    let a = random_orientation_preserving(rng, SPREAD);
    G2Point::from_phi(standard_phi::<f64>().pullback(&a)).expect("pullback of a positive form")
}

/// Matrix whose column `j` is `f(e_j)` on packed coefficients.
fn operator_matrix(degree: usize, f: impl Fn(&AlternatingForm) -> AlternatingForm) -> DMatrix<f64> {
    let n = form_len(degree);
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = AlternatingForm::zero(degree);
        e.coeffs_mut()[j] = 1.0;
        let col = f(&e);
        for i in 0..n {
            m[(i, j)] = col.coeffs()[i];
        }
    }
    m
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > RANK_TOL * top).count()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn worst<R: Rng + ?Sized>(rng: &mut R, n: usize, mut f: impl FnMut(&mut R) -> f64) -> f64 {
    (0..n).map(|_| f(rng)).fold(0.0, f64::max)
}

fn exterior_checks<R: Rng + ?Sized>(cfg: &PropertyConfig, rng: &mut R, rep: &mut VerificationReport) -> Result<()> {
    let random_degree = |rng: &mut R, max: usize| rng.random_range(0..=max);
    let comm = worst(rng, cfg.samples, |rng| {
        let p = random_degree(rng, DIM);
        let q = random_degree(rng, DIM - p);
        let (a, b) = (AlternatingForm::random(p, rng), AlternatingForm::random(q, rng));
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = wedge(&a, &b).expect("degree checked");
        let ba = wedge(&b, &a).expect("degree checked").scaled(&sign);
        rel((&ab - &ba).max_abs(), a.max_abs() * b.max_abs())
    });
    rep.push(Check::tolerance(
        "property.wedge_graded_commutative",
        PLUMBING,
        comm,
        ALGEBRA_TOL,
    ));
    let assoc = worst(rng, cfg.samples, |rng| {
        let p = random_degree(rng, DIM);
        let q = random_degree(rng, DIM - p);
        let r = random_degree(rng, DIM - p - q);
        let (a, b, c) = (
            AlternatingForm::random(p, rng),
            AlternatingForm::random(q, rng),
            AlternatingForm::random(r, rng),
        );
        let l = wedge(&wedge(&a, &b).expect("fits"), &c).expect("fits");
        let rr = wedge(&a, &wedge(&b, &c).expect("fits")).expect("fits");
        rel((&l - &rr).max_abs(), a.max_abs() * b.max_abs() * c.max_abs())
    });
    rep.push(Check::tolerance(
        "property.wedge_associative",
        PLUMBING,
        assoc,
        ALGEBRA_TOL,
    ));
    let leibniz = worst(rng, cfg.samples, |rng| {
        let p = rng.random_range(1..=DIM - 1);
        let q = rng.random_range(1..=DIM - p);
        let (a, b) = (AlternatingForm::random(p, rng), AlternatingForm::random(q, rng));
        let v: [f64; DIM] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let lhs = interior_product(&v, &wedge(&a, &b).expect("fits")).expect("degree ≥ 1");
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = &wedge(&interior_product(&v, &a).expect("p ≥ 1"), &b).expect("fits")
            + &wedge(&a, &interior_product(&v, &b).expect("q ≥ 1"))
                .expect("fits")
                .scaled(&sign);
        let scale = a.max_abs() * b.max_abs() * v.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        rel((&lhs - &rhs).max_abs(), scale)
    });
    rep.push(Check::tolerance(
        "property.interior_leibniz",
        PLUMBING,
        leibniz,
        ALGEBRA_TOL,
    ));

    let metrics: Vec<MetricData> = (0..cfg.metrics).map(|_| random_metric(rng)).collect();
    let mut star2: f64 = 0.0;
    let mut pairing: f64 = 0.0;
    for m in &metrics {
        for _ in 0..cfg.samples.div_ceil(cfg.metrics.max(1)).max(1) {
            let k = random_degree(rng, DIM);
            let (a, b) = (AlternatingForm::random(k, rng), AlternatingForm::random(k, rng));
            star2 = star2.max(form_rel(&hodge_star(&hodge_star(&a, m), m), &a));
            let lhs = wedge(&a, &hodge_star(&b, m))?;
            let rhs = volume_form(m).scaled(&form_inner(&a, &b, m)?);
            let scale = (form_inner(&a, &a, m)? * form_inner(&b, &b, m)?).sqrt() * m.vol_coeff();
            pairing = pairing.max(rel((&lhs - &rhs).max_abs(), scale));
        }
    }
    rep.push(Check::tolerance(
        "property.hodge_involution",
        PLUMBING,
        star2,
        ALGEBRA_TOL,
    ));
    rep.push(Check::tolerance(
        "property.hodge_pairing",
        PLUMBING,
        pairing,
        ALGEBRA_TOL,
    ));
    Ok(())
}

fn projector_checks<R: Rng + ?Sized>(
    label: &str,
    pt: &G2Point,
    cfg: &PropertyConfig,
    rng: &mut R,
    rep: &mut VerificationReport,
) -> Result<()> {
    let name = |s: &str| format!("property.{s}@{label}");
    // 2-forms
    let p14 = operator_matrix(2, |e| pt.project_2form(e).expect("degree 2").fourteen);
    let p7 = operator_matrix(2, |e| pt.project_2form(e).expect("degree 2").seven);
    let id2 = DMatrix::<f64>::identity(21, 21);
    // matrix residuals relative to the largest projector entry
    let scale2 = max_abs(&p7).max(max_abs(&p14)).max(1.0);
    let idem2 = max_abs(&(&p14 * &p14 - &p14)).max(max_abs(&(&p7 * &p7 - &p7))) / scale2;
    let annihil2 = max_abs(&(&p7 * &p14)).max(max_abs(&(&p14 * &p7))) / scale2;
    let sum2 = max_abs(&(&p7 + &p14 - &id2)) / scale2;
    let mut forms2: f64 = 0.0;
    for _ in 0..cfg.samples {
        let eta = AlternatingForm::random(2, rng);
        let parts = pt.project_2form(&eta)?;
        let again = pt.project_2form(&parts.fourteen)?;
        let s = (form_inner(&eta, &eta, pt.metric())?).sqrt();
        forms2 = forms2
            .max(rel(again.seven.max_abs(), s))
            .max(rel((&again.fourteen - &parts.fourteen).max_abs(), s))
            .max(rel(
                form_inner(&parts.seven, &parts.fourteen, pt.metric())?.abs(),
                s * s,
            ));
    }
    rep.push(Check::tolerance(
        name("two_form_idempotent"),
        anchors::TWO_FORM_SPLIT,
        idem2.max(forms2),
        ALGEBRA_TOL,
    ));
    rep.push(Check::tolerance(
        name("two_form_annihilating"),
        anchors::TWO_FORM_SPLIT,
        annihil2.max(sum2),
        ALGEBRA_TOL,
    ));
    let (r7, r14) = (numerical_rank(&p7), numerical_rank(&p14));
    rep.push(
        Check::tolerance(
            name("two_form_ranks"),
            anchors::TWO_FORM_SPLIT,
            ((r7 != 7) || (r14 != 14)) as u8 as f64,
            0.0,
        )
        .with_note(format!("ranks ({r7}, {r14})")),
    );

    // 3-forms
    let parts3 = |e: &AlternatingForm| pt.project_3form(e).expect("degree 3");
    let p1 = operator_matrix(3, |e| parts3(e).one);
    let p7 = operator_matrix(3, |e| parts3(e).seven);
    let p27 = operator_matrix(3, |e| parts3(e).twenty_seven);
    let ps = [&p1, &p7, &p27];
    let scale3 = ps.iter().map(|p| max_abs(p)).fold(1.0, f64::max);
    let idem3 = ps.iter().map(|p| max_abs(&(*p * *p - *p))).fold(0.0, f64::max) / scale3;
    let mut annihil3: f64 = 0.0;
    for (i, a) in ps.iter().enumerate() {
        for (j, b) in ps.iter().enumerate() {
            if i != j {
                annihil3 = annihil3.max(max_abs(&(*a * *b)));
            }
        }
    }
    annihil3 /= scale3;
    let sum3 = max_abs(&(&p1 + &p7 + &p27 - DMatrix::<f64>::identity(35, 35))) / scale3;
    let mut forms3: f64 = 0.0;
    for _ in 0..cfg.samples {
        let g = AlternatingForm::random(3, rng);
        let p = pt.project_3form(&g)?;
        let s = form_inner(&g, &g, pt.metric())?;
        let m = pt.metric();
        for (a, b) in [
            (&p.one, &p.seven),
            (&p.one, &p.twenty_seven),
            (&p.seven, &p.twenty_seven),
        ] {
            forms3 = forms3.max(rel(form_inner(a, b, m)?.abs(), s));
        }
        let again = pt.project_3form(&p.twenty_seven)?;
        forms3 = forms3.max(rel((&again.twenty_seven - &p.twenty_seven).max_abs(), s.sqrt()));
    }
    rep.push(Check::tolerance(
        name("three_form_idempotent"),
        anchors::THREE_FORM_SPLIT,
        idem3.max(forms3),
        ALGEBRA_TOL,
    ));
    rep.push(Check::tolerance(
        name("three_form_annihilating"),
        anchors::THREE_FORM_SPLIT,
        annihil3.max(sum3),
        ALGEBRA_TOL,
    ));
    let ranks = (numerical_rank(&p1), numerical_rank(&p7), numerical_rank(&p27));
    rep.push(
        Check::tolerance(
            name("three_form_ranks"),
            anchors::THREE_FORM_SPLIT,
            (ranks != (1, 7, 27)) as u8 as f64,
            0.0,
        )
        .with_note(format!("ranks {ranks:?}")),
    );

    // i_φ
    let g = SymmetricTwoTensor::metric(pt.metric());
    let mut trip: f64 = 0.0;
    for _ in 0..cfg.samples {
        let h = random_symmetric(rng);
        let back = pt.i_phi_inverse(&i_phi(&h, pt))?;
        trip = trip.max(rel(back.sub(&h).max_abs(), h.max_abs()));
    }
    rep.push(Check::tolerance(
        name("i_phi_round_trip"),
        anchors::IPHI_METRIC,
        trip,
        ROUND_TRIP_TOL,
    ));
    // image of trace-free tensors: injective, and inside the Ω³₂₇ projector's range
    let mut cols = Vec::new();
    let mut outside: f64 = 0.0;
    for a in 0..DIM {
        for b in a..DIM {
            let mut m = [[0.0; DIM]; DIM];
            m[a][b] = 1.0;
            m[b][a] = 1.0;
            let h = SymmetricTwoTensor::symmetrized(&m);
            let h0 = h.sub(&g.scaled(&(h.trace(pt.metric()) / 7.0)));
            let img = i_phi(&h0, pt);
            let proj = pt.project_3form(&img)?;
            outside = outside.max(rel((&img - &proj.twenty_seven).max_abs(), img.max_abs()));
            cols.push(img.into_coeffs());
        }
    }
    let image = DMatrix::from_fn(35, cols.len(), |i, j| cols[j][i]);
    let r = numerical_rank(&image);
    rep.push(
        Check::tolerance(
            name("i_phi_image"),
            anchors::THREE_FORM_SPLIT,
            outside.max((r != 27) as u8 as f64),
            ROUND_TRIP_TOL,
        )
        .with_note(format!("rank of i_phi on trace-free tensors {r}")),
    );
    Ok(())
}

fn equivariance<R: Rng + ?Sized>(cfg: &PropertyConfig, rng: &mut R) -> Result<f64> {
    let mut worst_rel: f64 = 0.0;
    for _ in 0..cfg.transforms {
        let base = random_positive_point(rng);
        let a = random_orientation_preserving(rng, SPREAD);
        let (m, _) = metric_from_phi(&base.phi().pullback(&a))?;
        let am = nalgebra::SMatrix::<f64, DIM, DIM>::from_fn(|i, j| a[i][j]);
        let expected = am.transpose() * base.metric().matrix() * am;
        worst_rel = worst_rel.max(rel((m.matrix() - expected).abs().max(), expected.abs().max()));
    }
    Ok(worst_rel)
}

/// `d∘d` on random trigonometric 1- and 2-form fields. Central differences
/// along different axes commute, so this vanishes to rounding.
fn d_squared<R: Rng + ?Sized>(rng: &mut R) -> Result<f64> {
    let chart = Chart::periodic([8, 8, 8, 5, 5, 5, 5], [2.0 * std::f64::consts::PI; DIM])?;
    let mut dep = [false; DIM];
    dep[..3].fill(true);
    let mut worst_rel: f64 = 0.0;
    for degree in [1, 2] {
        let n = form_len(degree);
        let modes: Vec<([i32; 3], f64, f64)> = (0..n)
            .map(|_| {
                (
                    std::array::from_fn(|_| rng.random_range(-2..=2)),
                    rng.sample(StandardNormal),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let w = form_field_from_fn(&chart, degree, dep, |x| {
            let c = modes
                .iter()
                .map(|(k, amp, ph)| amp * (k[0] as f64 * x[0] + k[1] as f64 * x[1] + k[2] as f64 * x[2] + ph).sin())
                .collect();
            AlternatingForm::from_coeffs(degree, c).expect("form_len coefficients")
        })?;
        let dw = exterior_derivative(&w)?;
        let ddw = exterior_derivative(&dw)?;
        worst_rel = worst_rel.max(rel(ddw.max_abs(), dw.max_abs().max(1.0)));
    }
    Ok(worst_rel)
}

/// Exterior algebra, projector, `i_φ` and equivariance invariants at the flat
/// point and at one random positive point.
pub fn property_suite<R: Rng + ?Sized>(cfg: &PropertyConfig, rng: &mut R) -> Result<VerificationReport> {
    let mut rep = VerificationReport::default();
    exterior_checks(cfg, rng, &mut rep)?;
    projector_checks("flat", &G2Point::flat(), cfg, rng, &mut rep)?;
    let pt = random_positive_point(rng);
    projector_checks("random", &pt, cfg, rng, &mut rep)?;
    rep.push(Check::tolerance(
        "property.metric_equivariance",
        anchors::METRIC_FROM_PHI,
        equivariance(cfg, rng)?,
        EQUIVARIANCE_TOL,
    ));
    rep.push(
        Check::tolerance("property.d_squared", anchors::CLOSED, d_squared(rng)?, ALGEBRA_TOL)
            .with_note("central differences commute: stencil-exact"),
    );
    Ok(rep)
}

use super::identities::rtt_field;
use super::{symmetric_at, Analysis};
use crate::error::{Error, Result};
use crate::exterior::{form_inner, MetricData, DIM};
use crate::fields::{TensorField, Valence};
use crate::g2::{G2Point, SymmetricTwoTensor};

/// `−k2 g ≤ Ric ≤ −k1 g`, by the eigenvalues of Ric relative to g.
pub fn ricci_bounds_hold(ric: &SymmetricTwoTensor, metric: &MetricData, k1: f64, k2: f64) -> bool {
    let ev = ric.eigenvalues(metric);
    ev[0] >= -k2 && ev[DIM - 1] <= -k1
}

/// Largest eigenvalue of `T²` relative to g.
pub fn t2_max_eigenvalue(t2: &SymmetricTwoTensor, metric: &MetricData) -> f64 {
    t2.eigenvalues(metric)[DIM - 1]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinchReport {
    pub k1: f64,
    pub k2: f64,
    pub epsilon: f64,
    pub points: usize,
    /// Points where `−k2 g ≤ Ric ≤ −k1 g`.
    pub hypothesis_points: usize,
    pub excluded: usize,
    /// `min (R_ij T^il T_l^j − k1 |R|)` over hypothesis points.
    pub min_margin: Option<f64>,
    /// Points where `Ric < 0`.
    pub negative_ricci_points: usize,
    /// `min R_ij T^il T_l^j` where `Ric < 0`.
    pub min_rtt_negative: Option<f64>,
    pub pass: bool,
}

/// Checks `R_ij T^il T_l^j ≥ k1 |R| − ε` where the pinching hypothesis holds,
/// and `R_ij T^il T_l^j ≥ −ε` wherever Ric is negative definite.
pub fn verify_pinch_bound(a: &Analysis, k1: f64, k2: f64, epsilon: f64) -> Result<PinchReport> {
    if !(k1 > 0.0 && k2 >= k1 && k2.is_finite()) {
        return Err(Error::InvalidPinching { k1, k2 });
    }
    let field = &a.field;
    let rtt = rtt_field(field, &a.torsion, &a.curvature)?;
    // columns: hypothesis flag, margin, negative flag, rtt
    let stats = TensorField::zip_map(
        &[&a.curvature.ricci, &a.curvature.scalar, &rtt],
        Valence::Form(1),
        |g, ins, out| {
            let m = field.point_at(&g).metric();
            let ev = symmetric_at(ins[0]).eigenvalues(m);
            let hyp = ev[0] >= -k2 && ev[DIM - 1] <= -k1;
            out[0] = hyp as u8 as f64;
            out[1] = ins[2][0] - k1 * ins[1][0].abs();
            out[2] = (ev[DIM - 1] < 0.0) as u8 as f64;
            out[3] = ins[2][0];
        },
    )?;
    let mut rep = PinchReport {
        k1,
        k2,
        epsilon,
        points: stats.point_count(),
        hypothesis_points: 0,
        excluded: 0,
        min_margin: None,
        negative_ricci_points: 0,
        min_rtt_negative: None,
        pass: true,
    };
    for p in 0..stats.point_count() {
        let v = stats.point_values(p);
        if v[0] == 1.0 {
            rep.hypothesis_points += 1;
            rep.min_margin = Some(rep.min_margin.map_or(v[1], |m: f64| m.min(v[1])));
        }
        if v[2] == 1.0 {
            rep.negative_ricci_points += 1;
            rep.min_rtt_negative = Some(rep.min_rtt_negative.map_or(v[3], |m: f64| m.min(v[3])));
        }
    }
    rep.excluded = rep.points - rep.hypothesis_points;
    rep.pass = rep.min_margin.is_none_or(|m| m >= -epsilon) && rep.min_rtt_negative.is_none_or(|m| m >= -epsilon);
    Ok(rep)
}

/// Pointwise Einstein case: with `T = −τ/2` for `τ ∈ Ω²₁₄`, `R = −|T|²` and
/// `Ric = (R/7) g`, the bound holds with equality for `k1 = |R|/7`. Returns
/// the relative gap `|R_ij T^il T_l^j − k1 |R|| / (k1 |R|)`.
pub fn synthetic_einstein_residual(pt: &G2Point, tau: &crate::exterior::AlternatingForm) -> Result<f64> {
    let m = pt.metric();
    let norm_t2 = 0.25 * 2.0 * form_inner(tau, tau, m)?;
    let r = -norm_t2;
    let k1 = r.abs() / 7.0;
    let mut t = [[0.0; DIM]; DIM];
    let mut p = 0;
    for i in 0..DIM {
        for j in i + 1..DIM {
            t[i][j] = -0.5 * tau.coeffs()[p];
            t[j][i] = -t[i][j];
            p += 1;
        }
    }
    let tm = super::matrix(&t.concat());
    let gi = m.inverse_matrix();
    let t2 = tm * gi * tm;
    let ric = m.matrix() * (r / 7.0);
    let rtt = (ric * gi * t2 * gi).trace();
    let expected = k1 * r.abs();
    if expected == 0.0 {
        return Ok(rtt.abs());
    }
    Ok((rtt - expected).abs() / expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn einstein_equality_is_exact() {
        let pt = G2Point::flat();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let tau = crate::g2::random_omega14(&pt, &mut rng);
            assert!(synthetic_einstein_residual(&pt, &tau).unwrap() < 1e-12);
        }
    }

    #[test]
    fn bounds_by_eigenvalues() {
        let pt = G2Point::<f64>::flat();
        let ric = SymmetricTwoTensor::metric(pt.metric()).scaled(&-2.0);
        assert!(ricci_bounds_hold(&ric, pt.metric(), 1.0, 3.0));
        assert!(!ricci_bounds_hold(&ric, pt.metric(), 2.5, 3.0));
        assert!(!ricci_bounds_hold(&ric, pt.metric(), 1.0, 1.5));
    }
}

//! The flat model in exact rational arithmetic. Every check here has zero
//! residual and zero tolerance.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use super::{i_phi, phi_bilinear, phi_contraction, G2Point, SymmetricTwoTensor};
use crate::error::Result;
use crate::exterior::{form_inner, form_len, form_power, hodge_star, wedge, AlternatingForm, Scalar, DIM};
use crate::report::{anchors, Check, VerificationReport};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn residual(x: &Q) -> f64 {
    Scalar::to_f64(&x.abs())
}

/// `L(η) = ∗(η ∧ φ₀)`.
pub fn l_operator(pt: &G2Point<Q>, eta: &AlternatingForm<Q>) -> Result<AlternatingForm<Q>> {
    Ok(hodge_star(&wedge(eta, pt.phi())?, pt.metric()))
}

/// Ω²₁₄ part via `(2η − L η) / 3`, valid because `L² − L − 2 = 0`.
pub fn project_14(pt: &G2Point<Q>, eta: &AlternatingForm<Q>) -> Result<AlternatingForm<Q>> {
    let l = l_operator(pt, eta)?;
    Ok((&eta.scaled(&q(2)) - &l).scaled(&Q::from_ratio(1, 3)))
}

fn random_int_form<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> AlternatingForm<Q> {
    let coeffs = (0..form_len(degree)).map(|_| q(rng.random_range(-3..=3))).collect();
    AlternatingForm::from_coeffs(degree, coeffs).expect("length matches")
}

fn random_int_symmetric<R: Rng + ?Sized>(rng: &mut R) -> SymmetricTwoTensor<Q> {
    let mut h: [[Q; DIM]; DIM] = std::array::from_fn(|_| std::array::from_fn(|_| Q::zero()));
    for i in 0..DIM {
        for j in i..DIM {
            let v = q(rng.random_range(-3..=3));
            h[i][j] = v.clone();
            h[j][i] = v;
        }
    }
    SymmetricTwoTensor::new(h).expect("symmetric by construction")
}

fn max_entry_diff(m: &[[Q; DIM]; DIM], scale: i64) -> Q {
    let mut worst = Q::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = if i == j { q(scale) } else { Q::zero() };
            let d = (v - e).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

fn exact(name: &str, anchor: &str, r: &Q) -> Check {
    Check::tolerance(name, anchor, residual(r), 0.0)
}

/// Certifies the integer constants of the flat model in exact arithmetic.
pub fn flat_exact_battery<R: Rng + ?Sized>(samples: usize, rng: &mut R) -> Result<VerificationReport> {
    let pt = G2Point::<Q>::flat();
    let m = pt.metric();
    let mut rep = VerificationReport::default();

    let top = wedge(pt.phi(), pt.psi())?.coeffs()[0].clone();
    rep.push(exact("exact.phi_norm", anchors::PHI_NORM, &(top - q(7))));

    rep.push(exact(
        "exact.phi_contraction",
        anchors::PHI_CONTRACTION,
        &max_entry_diff(&phi_contraction(&pt), 6),
    ));

    // ψ_labc ψ_m^{abc} = 24 g_lm fixes the 1/24 in the torsion formula.
    let mut psi_c: [[Q; DIM]; DIM] = std::array::from_fn(|_| std::array::from_fn(|_| Q::zero()));
    let slices: Vec<AlternatingForm<Q>> = (0..DIM)
        .map(|i| crate::exterior::interior_basis(i, pt.psi()))
        .collect::<Result<_>>()?;
    for l in 0..DIM {
        for mm in 0..DIM {
            psi_c[l][mm] = form_inner(&slices[l], &slices[mm], m)? * q(6);
        }
    }
    rep.push(exact(
        "exact.psi_contraction",
        anchors::TORSION,
        &max_entry_diff(&psi_c, 24),
    ));

    let ig = i_phi(&SymmetricTwoTensor::metric(m), &pt);
    let diff = &ig - &pt.phi().scaled(&q(3));
    rep.push(exact(
        "exact.i_phi_metric",
        anchors::IPHI_METRIC,
        &form_inner(&diff, &diff, m)?,
    ));

    rep.push(exact(
        "exact.metric_from_phi",
        anchors::METRIC_FROM_PHI,
        &max_entry_diff(&phi_bilinear(pt.phi())?, 1),
    ));

    let mut minpoly = Q::zero();
    for j in 0..form_len(2) {
        let mut e = AlternatingForm::<Q>::zero(2);
        e.coeffs_mut()[j] = q(1);
        let l1 = l_operator(&pt, &e)?;
        let l2 = l_operator(&pt, &l1)?;
        let r = &(&l2 - &l1) - &e.scaled(&q(2));
        let n = form_inner(&r, &r, m)?;
        if n > minpoly {
            minpoly = n;
        }
    }
    rep.push(exact(
        "exact.two_form_minimal_polynomial",
        anchors::TWO_FORM_SPLIT,
        &minpoly,
    ));

    let (mut sign, mut square, mut cubed) = (Q::zero(), Q::zero(), Q::zero());
    for _ in 0..samples {
        let eta = project_14(&pt, &random_int_form(2, rng))?;
        let s = &wedge(&eta, pt.phi())? + &hodge_star(&eta, m);
        let s = form_inner(&s, &s, m)?;
        if s > sign {
            sign = s;
        }
        let n = form_inner(&eta, &eta, m)?;
        let e2 = form_power(&eta, 2)?;
        let d = (form_inner(&e2, &e2, m)? - n.clone() * n.clone()).abs();
        if d > square {
            square = d;
        }
        let e3 = form_power(&eta, 3)?;
        let excess = form_inner(&e3, &e3, m)? - Q::from_ratio(2, 3) * n.clone() * n.clone() * n;
        if excess > cubed {
            cubed = excess;
        }
    }
    rep.push(exact("exact.omega14_sign", anchors::OMEGA14_SIGN, &sign));
    rep.push(exact("exact.eta_squared", anchors::ETA_SQUARED, &square));
    rep.push(exact("exact.eta_cubed", anchors::ETA_CUBED, &cubed));

    let mut pairing = Q::zero();
    for _ in 0..samples {
        let u = random_int_symmetric(rng);
        let v = random_int_symmetric(rng);
        let lhs = wedge(&i_phi(&u, &pt), &hodge_star(&i_phi(&v, &pt), m))?.coeffs()[0].clone();
        let rhs = u.trace(m) * v.trace(m) + q(2) * u.inner(&v, m);
        let d = (lhs - rhs).abs();
        if d > pairing {
            pairing = d;
        }
    }
    rep.push(exact("exact.i_phi_pairing", anchors::IPHI_PAIRING, &pairing));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_battery_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rep = flat_exact_battery(4, &mut rng).unwrap();
        for c in &rep.checks {
            assert!(c.pass && c.residual == 0.0, "{c:?}");
        }
    }
}

use rand::Rng;

use super::{i_phi, phi_contraction, G2Point, SymmetricTwoTensor};
use crate::error::{Error, Result};
use crate::exterior::{form_inner, form_power, hodge_star, wedge, AlternatingForm, DIM};
use crate::report::{anchors, Check, VerificationReport};

/// Relative tolerance for the pointwise equalities.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Gaussian symmetric tensor with unit-variance entries.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R) -> SymmetricTwoTensor {
    let mut m = [[0.0; DIM]; DIM];
    for row in m.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.sample(rand_distr::StandardNormal);
        }
    }
    SymmetricTwoTensor::symmetrized(&m)
}

/// A random element of Ω²₁₄ at `pt`: the projection of a Gaussian 2-form.
pub fn random_omega14<R: Rng + ?Sized>(pt: &G2Point, rng: &mut R) -> AlternatingForm {
    let eta = AlternatingForm::random(2, rng);
    pt.project_2form(&eta).expect("degree 2").fourteen
}

fn norm(a: &AlternatingForm, pt: &G2Point) -> f64 {
    form_inner(a, a, pt.metric()).expect("same degree").max(0.0).sqrt()
}

/// Residuals of the pointwise identities at `pt`, with `samples` random
/// Ω²₁₄ forms and symmetric pairs.
pub fn pointwise_identity_battery<R: Rng + ?Sized>(
    pt: &G2Point,
    samples: usize,
    rng: &mut R,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    let mut rep = VerificationReport::default();
    let vol = pt.metric().vol_coeff();

    let top = wedge(pt.phi(), pt.psi())?.coeffs()[0];
    rep.push(Check::tolerance(
        "pointwise.phi_norm",
        anchors::PHI_NORM,
        (top / vol - 7.0).abs() / 7.0,
        EQUALITY_TOL,
    ));

    let c = phi_contraction(pt);
    let g = pt.metric().g();
    let mut worst: f64 = 0.0;
    for l in 0..DIM {
        for p in 0..DIM {
            worst = worst.max((c[l][p] - 6.0 * g[l][p]).abs());
        }
    }
    let gscale = g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    rep.push(Check::tolerance(
        "pointwise.phi_contraction",
        anchors::PHI_CONTRACTION,
        worst / (6.0 * gscale),
        EQUALITY_TOL,
    ));

    let ig = i_phi(&SymmetricTwoTensor::metric(pt.metric()), pt);
    rep.push(Check::tolerance(
        "pointwise.i_phi_metric",
        anchors::IPHI_METRIC,
        norm(&(&ig - &pt.phi().scaled(&3.0)), pt) / (3.0 * 7f64.sqrt()),
        EQUALITY_TOL,
    ));

    let ev = pt.decomposition().two_form_eigenvalues();
    let minus = ev.iter().filter(|l| (**l + 1.0).abs() < 1e-6).count();
    let plus = ev.iter().filter(|l| (**l - 2.0).abs() < 1e-6).count();
    let spread = ev
        .iter()
        .map(|l| (l + 1.0).abs().min((l - 2.0).abs()))
        .fold(0.0, f64::max);
    let mut spectrum = Check::tolerance(
        "pointwise.two_form_spectrum",
        anchors::TWO_FORM_SPLIT,
        spread,
        EQUALITY_TOL,
    )
    .with_note(format!("multiplicity of -1: {minus}; of 2: {plus}"));
    spectrum.pass &= minus == 14 && plus == 7;
    rep.push(spectrum);

    let (mut sign, mut square, mut ratio): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let eta = random_omega14(pt, rng);
        let n = norm(&eta, pt);
        if n == 0.0 {
            continue;
        }
        let lhs = wedge(&eta, pt.phi())?;
        sign = sign.max(norm(&(&lhs + &hodge_star(&eta, pt.metric())), pt) / n);
        let e2 = form_power(&eta, 2)?;
        let n2 = form_inner(&e2, &e2, pt.metric())?;
        square = square.max((n2 - n.powi(4)).abs() / n.powi(4));
        let e3 = form_power(&eta, 3)?;
        let n3 = form_inner(&e3, &e3, pt.metric())?;
        ratio = ratio.max(n3 / (2.0 / 3.0 * n.powi(6)));
    }
    rep.push(Check::tolerance(
        "pointwise.omega14_sign",
        anchors::OMEGA14_SIGN,
        sign,
        EQUALITY_TOL,
    ));
    rep.push(Check::tolerance(
        "pointwise.eta_squared",
        anchors::ETA_SQUARED,
        square,
        EQUALITY_TOL,
    ));
    rep.push(
        Check::tolerance(
            "pointwise.eta_cubed",
            anchors::ETA_CUBED,
            (ratio - 1.0).max(0.0),
            EQUALITY_TOL,
        )
        .with_note(format!("max |eta^3|^2 / ((2/3)|eta|^6) = {ratio:.12}")),
    );
    let zero = AlternatingForm::zero(2);
    let z3 = form_power(&zero, 3)?;
    rep.push(Check::tolerance(
        "pointwise.eta_cubed_zero",
        anchors::ETA_CUBED,
        form_inner(&z3, &z3, pt.metric())?.abs(),
        0.0,
    ));

    let mut pairing: f64 = 0.0;
    for _ in 0..samples {
        let u = random_symmetric(rng);
        let v = random_symmetric(rng);
        let lhs = wedge(&i_phi(&u, pt), &hodge_star(&i_phi(&v, pt), pt.metric()))?.coeffs()[0] / vol;
        let tu = u.trace(pt.metric());
        let tv = v.trace(pt.metric());
        let uv = u.inner(&v, pt.metric());
        let rhs = tu * tv + 2.0 * uv;
        let scale = (u.inner(&u, pt.metric()) * v.inner(&v, pt.metric())).sqrt().max(1.0);
        pairing = pairing.max((lhs - rhs).abs() / scale);
    }
    rep.push(Check::tolerance(
        "pointwise.i_phi_pairing",
        anchors::IPHI_PAIRING,
        pairing,
        EQUALITY_TOL,
    ));

    let mut split: f64 = 0.0;
    for _ in 0..samples.min(20) {
        let gamma = AlternatingForm::random(3, rng);
        let p = pt.project_3form(&gamma)?;
        let n = norm(&gamma, pt);
        let parts = [&p.one, &p.seven, &p.twenty_seven];
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                split = split.max(form_inner(a, b, pt.metric())?.abs() / (n * n));
            }
        }
        let again = pt.project_3form(&p.twenty_seven)?;
        split = split.max(norm(&(&again.twenty_seven - &p.twenty_seven), pt) / n);
    }
    rep.push(Check::tolerance(
        "pointwise.three_form_split",
        anchors::THREE_FORM_SPLIT,
        split,
        EQUALITY_TOL,
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_battery_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rep = pointwise_identity_battery(&G2Point::flat(), 20, &mut rng).unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(pointwise_identity_battery(&G2Point::flat(), 0, &mut rng).is_err());
    }
}

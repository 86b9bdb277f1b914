//! Example closed structures `φ₀ + t dβ` with `dβ` evaluated analytically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{AlternatingForm, DIM};
use crate::fields::{Chart, TensorField, Valence};
use crate::g2::standard_phi;
use crate::torsion::G2Field;

/// One factor of a coefficient function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Factor {
    Sin { axis: usize, freq: i32 },
    Cos { axis: usize, freq: i32 },
    Monomial { axis: usize, power: u32 },
}

impl Factor {
    fn axis(&self) -> usize {
        match *self {
            Factor::Sin { axis, .. } | Factor::Cos { axis, .. } | Factor::Monomial { axis, .. } => axis,
        }
    }

    fn value(&self, x: &[f64; DIM]) -> f64 {
        match *self {
            Factor::Sin { axis, freq } => (freq as f64 * x[axis]).sin(),
            Factor::Cos { axis, freq } => (freq as f64 * x[axis]).cos(),
            Factor::Monomial { axis, power } => x[axis].powi(power as i32),
        }
    }

    fn derivative(&self, x: &[f64; DIM]) -> f64 {
        match *self {
            Factor::Sin { axis, freq } => freq as f64 * (freq as f64 * x[axis]).cos(),
            Factor::Cos { axis, freq } => -(freq as f64) * (freq as f64 * x[axis]).sin(),
            Factor::Monomial { axis, power } => match power {
                0 => 0.0,
                p => p as f64 * x[axis].powi(p as i32 - 1),
            },
        }
    }
}

/// `coeff · Π factors · dx^i ∧ dx^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaTerm {
    pub indices: [usize; 2],
    pub coeff: f64,
    pub factors: Vec<Factor>,
}

/// A 2-form `β` given as a sum of separable terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSpec {
    pub terms: Vec<BetaTerm>,
}

fn term(i: usize, j: usize, coeff: f64, factors: Vec<Factor>) -> BetaTerm {
    BetaTerm {
        indices: [i, j],
        coeff,
        factors,
    }
}

impl Default for BetaSpec {
    fn default() -> Self {
        Self::trigonometric()
    }
}

impl BetaSpec {
    /// Periodic coefficients depending on the first three coordinates.
    pub fn trigonometric() -> Self {
        use Factor::{Cos, Sin};
        BetaSpec {
            terms: vec![
                term(3, 4, 1.0, vec![Sin { axis: 0, freq: 1 }, Cos { axis: 1, freq: 1 }]),
                term(5, 6, 0.8, vec![Cos { axis: 1, freq: 1 }, Sin { axis: 2, freq: 1 }]),
                term(1, 5, 0.6, vec![Sin { axis: 2, freq: 1 }, Cos { axis: 0, freq: 1 }]),
                term(0, 3, 0.5, vec![Cos { axis: 1, freq: 1 }, Cos { axis: 2, freq: 1 }]),
                term(2, 6, 0.7, vec![Sin { axis: 0, freq: 1 }, Sin { axis: 1, freq: 1 }]),
            ],
        }
    }

    /// Coefficients of degree at most 2, so `dβ` is linear and central
    /// differences reproduce `d(dβ) = 0` exactly.
    pub fn quadratic() -> Self {
        use Factor::Monomial;
        BetaSpec {
            terms: vec![
                term(
                    3,
                    4,
                    1.0,
                    vec![Monomial { axis: 0, power: 1 }, Monomial { axis: 1, power: 1 }],
                ),
                term(5, 6, 0.5, vec![Monomial { axis: 2, power: 2 }]),
                term(1, 5, 0.3, vec![Monomial { axis: 0, power: 2 }]),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            let [i, j] = t.indices;
            if i >= DIM || j >= DIM || i == j {
                return Err(Error::Config(format!("beta term indices {:?} invalid", t.indices)));
            }
            if !t.coeff.is_finite() {
                return Err(Error::Config("beta coefficient must be finite".into()));
            }
            if t.factors.iter().any(|f| f.axis() >= DIM) {
                return Err(Error::Config("beta factor axis out of range".into()));
            }
        }
        Ok(())
    }

    /// Coordinates the coefficients depend on.
    pub fn active_axes(&self) -> [bool; DIM] {
        let mut a = [false; DIM];
        for t in &self.terms {
            for f in &t.factors {
                if !matches!(f, Factor::Monomial { power: 0, .. }) {
                    a[f.axis()] = true;
                }
            }
        }
        a
    }

    pub fn beta(&self, x: &[f64; DIM]) -> AlternatingForm {
        let mut out = AlternatingForm::zero(2);
        for t in &self.terms {
            let v = t.coeff * t.factors.iter().map(|f| f.value(x)).product::<f64>();
            let b = AlternatingForm::basis(&t.indices).expect("validated indices");
            out = &out + &b.scaled(&v);
        }
        out
    }

    /// `dβ` by the product rule.
    pub fn d_beta(&self, x: &[f64; DIM]) -> AlternatingForm {
        let mut out = AlternatingForm::zero(3);
        for t in &self.terms {
            for (k, f) in t.factors.iter().enumerate() {
                let mut v = t.coeff * f.derivative(x);
                if v == 0.0 {
                    continue;
                }
                for (m, other) in t.factors.iter().enumerate() {
                    if m != k {
                        v *= other.value(x);
                    }
                }
                let a = f.axis();
                if a == t.indices[0] || a == t.indices[1] {
                    continue;
                }
                let b = AlternatingForm::basis(&[a, t.indices[0], t.indices[1]]).expect("distinct indices");
                out = &out + &b.scaled(&v);
            }
        }
        out
    }
}

/// Default amplitude of the perturbation.
pub const DEFAULT_AMPLITUDE: f64 = 0.05;

/// Resolution used along axes the structure does not depend on.
pub const INACTIVE_RESOLUTION: usize = 5;

/// Periodic `[0, 2π)^7` chart with `n` points along the active axes of `beta`.
pub fn gallery_chart(beta: &BetaSpec, n: usize) -> Result<Chart> {
    let active = beta.active_axes();
    let res = std::array::from_fn(|a| if active[a] { n } else { INACTIVE_RESOLUTION });
    Chart::periodic(res, [2.0 * std::f64::consts::PI; DIM])
}

/// The constant field `φ₀`.
pub fn flat_structure(chart: &Chart) -> Result<TensorField> {
    TensorField::constant(chart, Valence::Form(3), standard_phi::<f64>().coeffs())
}

/// `φ₀ + t dβ`, rejected with the worst point when φ is not positive.
pub fn perturbed_closed(chart: &Chart, beta: &BetaSpec, amplitude: f64) -> Result<TensorField> {
    beta.validate()?;
    let phi0 = standard_phi::<f64>();
    let field = TensorField::sample(chart, Valence::Form(3), beta.active_axes(), |x| {
        (&phi0 + &beta.d_beta(x).scaled(&amplitude)).into_coeffs()
    })?;
    positivity_margin(&field)?;
    Ok(field)
}

/// `min λ_min(g)/λ_max(g)` over the field; errors at non-positive points.
pub fn positivity_margin(phi: &TensorField) -> Result<f64> {
    Ok(G2Field::from_phi(phi)?.positivity_margin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_beta_matches_finite_difference() {
        let b = BetaSpec::trigonometric();
        let x = [0.3, -0.7, 1.1, 0.0, 0.2, 0.0, 0.5];
        let db = b.d_beta(&x);
        let h = 1e-5;
        // dβ = Σ_a dx^a ∧ ∂_a β
        let mut fd = AlternatingForm::zero(3);
        for a in 0..DIM {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let d = (&b.beta(&xp) - &b.beta(&xm)).scaled(&(0.5 / h));
            let e = AlternatingForm::basis(&[a]).unwrap();
            fd = &fd + &e.wedge(&d).unwrap();
        }
        assert!((&fd - &db).max_abs() < 1e-8);
    }

    #[test]
    fn large_amplitude_rejected() {
        let b = BetaSpec::trigonometric();
        let chart = gallery_chart(&b, 8).unwrap();
        assert!(matches!(
            perturbed_closed(&chart, &b, 10.0),
            Err(Error::NonPositiveAt { .. })
        ));
    }

    #[test]
    fn default_margin() {
        let b = BetaSpec::trigonometric();
        let chart = gallery_chart(&b, 8).unwrap();
        let phi = perturbed_closed(&chart, &b, DEFAULT_AMPLITUDE).unwrap();
        assert!(positivity_margin(&phi).unwrap() > 0.5);
    }
}

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{i_phi, G2Point, SymmetricTwoTensor};
use crate::error::{Error, Result};
use crate::exterior::{form_inner, form_len, hodge_star, wedge, AlternatingForm, DIM};

/// The two components of a 2-form.
#[derive(Debug, Clone)]
pub struct TwoFormParts {
    pub seven: AlternatingForm,
    pub fourteen: AlternatingForm,
}

/// The three components of a 3-form.
#[derive(Debug, Clone)]
pub struct ThreeFormParts {
    pub one: AlternatingForm,
    pub seven: AlternatingForm,
    pub twenty_seven: AlternatingForm,
}

/// Projectors at a fixed point.
///
/// Ω²₁₄ is the −1 eigenspace of `L(η) = ∗(η ∧ φ)`, found by diagonalising `L`
/// in a basis orthonormal for the induced inner product. The 3-form split uses
/// the weighted least-squares inverse of `i_φ` on symmetric tensors, whose image
/// is Ω³₁ ⊕ Ω³₂₇.
#[derive(Debug, Clone)]
pub struct Decomposition {
    p14: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    lsq: DMatrix<f64>,
}

/// `(a, b)` with `a ≤ b`, the basis of symmetric tensors.
fn sym_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..DIM).flat_map(|a| (a..DIM).map(move |b| (a, b)))
}

fn gram(pt: &G2Point, degree: usize) -> DMatrix<f64> {
    let n = form_len(degree);
    let mut m = DMatrix::zeros(n, n);
    let basis: Vec<AlternatingForm> = (0..n).map(|i| unit(degree, i)).collect();
    for i in 0..n {
        for j in i..n {
            let v = form_inner(&basis[i], &basis[j], pt.metric()).expect("same degree");
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn unit(degree: usize, i: usize) -> AlternatingForm {
    let mut f = AlternatingForm::zero(degree);
    f.coeffs_mut()[i] = 1.0;
    f
}

fn to_vec(f: &AlternatingForm) -> DVector<f64> {
    DVector::from_column_slice(f.coeffs())
}

fn from_vec(degree: usize, v: &DVector<f64>) -> AlternatingForm {
    AlternatingForm::from_coeffs(degree, v.iter().copied().collect()).expect("length matches degree")
}

fn check_degree(f: &AlternatingForm, degree: usize) -> Result<()> {
    if f.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: f.degree(),
        });
    }
    Ok(())
}

impl Decomposition {
    pub fn new(pt: &G2Point) -> Self {
        let n2 = form_len(2);
        let mut l = DMatrix::zeros(n2, n2);
        for j in 0..n2 {
            let img = hodge_star(&wedge(&unit(2, j), pt.phi()).expect("2 + 3 <= 7"), pt.metric());
            l.set_column(j, &to_vec(&img));
        }
        let k = gram(pt, 2).cholesky().expect("induced inner product is definite").l();
        let kt = k.transpose();
        let kt_inv = kt.clone().try_inverse().expect("triangular factor invertible");
        let m = &kt * &l * &kt_inv;
        let eig = SymmetricEigen::new((&m + m.transpose()) * 0.5);
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        let cols: Vec<usize> = (0..n2).filter(|&i| (eig.eigenvalues[i] + 1.0).abs() < 1.5).collect();
        let mut u = DMatrix::zeros(n2, cols.len());
        for (c, &i) in cols.iter().enumerate() {
            u.set_column(c, &eig.eigenvectors.column(i));
        }
        let p14 = &kt_inv * (&u * u.transpose()) * &kt;

        let n3 = form_len(3);
        let pairs: Vec<(usize, usize)> = sym_pairs().collect();
        let mut a = DMatrix::zeros(n3, pairs.len());
        for (c, &(i, j)) in pairs.iter().enumerate() {
            let img = i_phi(&sym_unit(i, j), pt);
            a.set_column(c, &to_vec(&img));
        }
        // min |Kᵀ(A x − γ)| with W = K Kᵀ, by QR of the whitened system
        let kt3 = gram(pt, 3)
            .cholesky()
            .expect("induced inner product is definite")
            .l()
            .transpose();
        let qr = (&kt3 * &a).qr();
        let r_inv = qr.r().try_inverse().expect("i_phi is injective on symmetric tensors");
        let lsq = r_inv * qr.q().transpose() * kt3;
        Decomposition { p14, eigenvalues, lsq }
    }

    /// Spectrum of `η ↦ ∗(η ∧ φ)`, ascending.
    pub fn two_form_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn project_2form(&self, eta: &AlternatingForm) -> Result<TwoFormParts> {
        check_degree(eta, 2)?;
        let fourteen = from_vec(2, &(&self.p14 * to_vec(eta)));
        let seven = eta - &fourteen;
        Ok(TwoFormParts { seven, fourteen })
    }

    /// The symmetric tensor whose `i_φ` image is the Ω³₁ ⊕ Ω³₂₇ part of `γ`.
    fn preimage(&self, gamma: &AlternatingForm) -> SymmetricTwoTensor {
        let x = &self.lsq * to_vec(gamma);
        let mut h = [[0.0; DIM]; DIM];
        for (c, (i, j)) in sym_pairs().enumerate() {
            h[i][j] = x[c];
            h[j][i] = x[c];
        }
        SymmetricTwoTensor { h }
    }

    pub fn project_3form(&self, pt: &G2Point, gamma: &AlternatingForm) -> Result<ThreeFormParts> {
        check_degree(gamma, 3)?;
        let h = self.preimage(gamma);
        let tr = h.trace(pt.metric()) / 7.0;
        let one = pt.phi().scaled(&(3.0 * tr));
        let h0 = h.sub(&SymmetricTwoTensor::metric(pt.metric()).scaled(&tr));
        let twenty_seven = i_phi(&h0, pt);
        let seven = &(gamma - &one) - &twenty_seven;
        Ok(ThreeFormParts {
            one,
            seven,
            twenty_seven,
        })
    }

    /// Right inverse of `i_φ`. Fails when the Ω³₇ part of `γ` exceeds
    /// `1e-8 · max(1, |γ|)`.
    pub fn i_phi_inverse(&self, pt: &G2Point, gamma: &AlternatingForm) -> Result<SymmetricTwoTensor> {
        check_degree(gamma, 3)?;
        let h = self.preimage(gamma);
        let rest = gamma - &i_phi(&h, pt);
        let norm = form_inner(&rest, &rest, pt.metric())?.max(0.0).sqrt();
        let scale = form_inner(gamma, gamma, pt.metric())?.max(0.0).sqrt().max(1.0);
        if norm > 1e-8 * scale {
            return Err(Error::NoSymmetricPreimage(norm));
        }
        Ok(h)
    }

    /// Like [`Self::i_phi_inverse`] but drops the Ω³₇ part, returning its norm.
    pub fn i_phi_inverse_lenient(&self, pt: &G2Point, gamma: &AlternatingForm) -> Result<(SymmetricTwoTensor, f64)> {
        check_degree(gamma, 3)?;
        let h = self.preimage(gamma);
        let rest = gamma - &i_phi(&h, pt);
        let norm = form_inner(&rest, &rest, pt.metric())?.max(0.0).sqrt();
        Ok((h, norm))
    }
}

fn sym_unit(i: usize, j: usize) -> SymmetricTwoTensor {
    let mut h = [[0.0; DIM]; DIM];
    h[i][j] = 1.0;
    h[j][i] = 1.0;
    SymmetricTwoTensor { h }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_spectrum() {
        let pt = G2Point::<f64>::flat();
        let ev = pt.decomposition().two_form_eigenvalues();
        assert!(ev[..14].iter().all(|l| (l + 1.0).abs() < 1e-12));
        assert!(ev[14..].iter().all(|l| (l - 2.0).abs() < 1e-12));
    }

    #[test]
    fn zero_projects_to_zero() {
        let pt = G2Point::<f64>::flat();
        let p = pt.project_2form(&AlternatingForm::zero(2)).unwrap();
        assert!(p.seven.is_zero() && p.fourteen.is_zero());
    }

    #[test]
    fn phi_is_pure_type_one() {
        let pt = G2Point::<f64>::flat();
        let p = pt.project_3form(pt.phi()).unwrap();
        assert!((&p.one - pt.phi()).max_abs() < 1e-12);
        assert!(p.seven.max_abs() < 1e-12);
        assert!(p.twenty_seven.max_abs() < 1e-12);
    }

    #[test]
    fn inverse_of_three_phi() {
        let pt = G2Point::<f64>::flat();
        let h = pt.i_phi_inverse(&pt.phi().scaled(&3.0)).unwrap();
        let id = SymmetricTwoTensor::metric(pt.metric());
        assert!(h.sub(&id).max_abs() < 1e-12);
    }

    #[test]
    fn seven_part_has_no_preimage() {
        let pt = G2Point::<f64>::flat();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gamma = AlternatingForm::random(3, &mut rng);
        let seven = pt.project_3form(&gamma).unwrap().seven;
        assert!(matches!(pt.i_phi_inverse(&seven), Err(Error::NoSymmetricPreimage(_))));
    }

    #[test]
    fn wrong_degrees_rejected() {
        let pt = G2Point::<f64>::flat();
        assert!(pt.project_2form(&AlternatingForm::zero(3)).is_err());
        assert!(pt.project_3form(&AlternatingForm::zero(2)).is_err());
    }
}

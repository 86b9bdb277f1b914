use std::sync::OnceLock;

use nalgebra::SMatrix;

use super::index::{mask_indices, tables, DIM};
use super::scalar::{determinant, Scalar};
use crate::error::{Error, Result};

pub type Mat7<S> = [[S; DIM]; DIM];
pub type Matrix7 = SMatrix<f64, DIM, DIM>;

/// A positive-definite inner product on the 7-dimensional space together with
/// its inverse and the volume coefficient `sqrt(det g)`.
///
/// The k-th compound matrices of `g^{-1}` (the induced inner products on
/// packed k-forms) are built lazily and cached.
#[derive(Debug, Clone)]
pub struct MetricData<S: Scalar = f64> {
    g: Mat7<S>,
    g_inv: Mat7<S>,
    vol_coeff: S,
    identity: bool,
    compounds: [OnceLock<Vec<S>>; DIM + 1],
}

impl<S: Scalar> MetricData<S> {
    pub fn euclidean() -> Self {
        let id: Mat7<S> = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::one() } else { S::zero() }));
        Self::from_parts(id.clone(), id, S::one(), true)
    }

    fn from_parts(g: Mat7<S>, g_inv: Mat7<S>, vol_coeff: S, identity: bool) -> Self {
        MetricData {
            g,
            g_inv,
            vol_coeff,
            identity,
            compounds: Default::default(),
        }
    }

    pub fn g(&self) -> &Mat7<S> {
        &self.g
    }

    pub fn g_inv(&self) -> &Mat7<S> {
        &self.g_inv
    }

    /// Coefficient of `dx^1 ∧ .. ∧ dx^7` in the volume form.
    pub fn vol_coeff(&self) -> &S {
        &self.vol_coeff
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// Row-major `C(7,k) x C(7,k)` matrix of k-minors of `g^{-1}`.
    pub(crate) fn compound(&self, degree: usize) -> &[S] {
        self.compounds[degree].get_or_init(|| compound_matrix(&self.g_inv, degree))
    }

    /// Raises one index of a covector: `v^i = g^{ij} w_j`.
    pub fn raise(&self, w: &[S; DIM]) -> [S; DIM] {
        std::array::from_fn(|i| (0..DIM).fold(S::zero(), |acc, j| acc + self.g_inv[i][j].clone() * w[j].clone()))
    }
}

impl MetricData<f64> {
    /// Validates symmetry and positive definiteness, then inverts.
    pub fn new(g: Mat7<f64>) -> Result<Self> {
        let m = Matrix7::from_fn(|i, j| g[i][j]);
        let scale = m.amax().max(f64::MIN_POSITIVE);
        for i in 0..DIM {
            for j in 0..i {
                if (g[i][j] - g[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::SingularMetric);
                }
            }
        }
        let sym = (m + m.transpose()) * 0.5;
        let chol = sym.cholesky().ok_or(Error::SingularMetric)?;
        let inv = chol.inverse();
        let det: f64 = chol.l().diagonal().iter().map(|d| d * d).product();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::SingularMetric);
        }
        let g_sym = to_array(&sym);
        let g_inv = to_array(&((inv + inv.transpose()) * 0.5));
        Ok(Self::from_parts(g_sym, g_inv, det.sqrt(), false))
    }

    pub fn matrix(&self) -> Matrix7 {
        Matrix7::from_fn(|i, j| self.g[i][j])
    }

    pub fn inverse_matrix(&self) -> Matrix7 {
        Matrix7::from_fn(|i, j| self.g_inv[i][j])
    }
}

pub(crate) fn to_array(m: &Matrix7) -> Mat7<f64> {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)]))
}

pub(crate) fn compound_matrix<S: Scalar>(m: &Mat7<S>, degree: usize) -> Vec<S> {
    let masks = tables().masks(degree);
    let n = masks.len();
    let mut out = Vec::with_capacity(n * n);
    for &rows in masks {
        let ri: Vec<usize> = mask_indices(rows).collect();
        for &cols in masks {
            let ci: Vec<usize> = mask_indices(cols).collect();
            let sub: Vec<Vec<S>> = ri
                .iter()
                .map(|&r| ci.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            out.push(if degree == 0 { S::one() } else { determinant(sub) });
        }
    }
    out
}

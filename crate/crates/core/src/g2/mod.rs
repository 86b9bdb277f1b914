//! Pointwise G₂-structure algebra: the flat model, metric recovery from a
//! 3-form, the `i_φ` map, type decompositions and the identity battery.

mod battery;
mod decompose;
pub mod exact;

use std::sync::OnceLock;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::exterior::{
    hodge_star, interior_basis, to_array, wedge, AlternatingForm, Mat7, Matrix7, MetricData, Scalar, DIM,
};

pub use battery::{pointwise_identity_battery, random_omega14, random_symmetric, EQUALITY_TOL};
pub use decompose::{Decomposition, ThreeFormParts, TwoFormParts};

/// Increasing index triples of the flat model φ₀ with their signs.
const STANDARD_TERMS: [([usize; 3], i64); 7] = [
    ([0, 1, 2], 1),
    ([0, 3, 4], 1),
    ([0, 5, 6], 1),
    ([1, 3, 5], 1),
    ([1, 4, 6], -1),
    ([2, 3, 6], -1),
    ([2, 4, 5], -1),
];

/// The flat model `φ₀ = e123 + e145 + e167 + e246 − e257 − e347 − e356`
/// (indices 1-based). Its metric is the identity and `η ∧ φ₀ = −∗η` on Ω²₁₄.
pub fn standard_phi<S: Scalar>() -> AlternatingForm<S> {
    let mut phi = AlternatingForm::zero(3);
    for (idx, sign) in STANDARD_TERMS {
        phi.set(&idx, S::from_int(sign)).expect("valid triple");
    }
    phi
}

/// `b_ij`: the top coefficient of `(1/6) ι_i φ ∧ ι_j φ ∧ φ`.
pub fn phi_bilinear<S: Scalar>(phi: &AlternatingForm<S>) -> Result<Mat7<S>> {
    if phi.degree() != 3 {
        return Err(Error::DegreeMismatch {
            expected: 3,
            found: phi.degree(),
        });
    }
    let slices = (0..DIM).map(|i| interior_basis(i, phi)).collect::<Result<Vec<_>>>()?;
    let fives = slices.iter().map(|s| wedge(s, phi)).collect::<Result<Vec<_>>>()?;
    let sixth = S::from_ratio(1, 6);
    let mut b: Mat7<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for i in 0..DIM {
        for j in i..DIM {
            let top = wedge(&slices[j], &fives[i])?;
            let v = top.coeffs()[0].clone() * sixth.clone();
            b[i][j] = v.clone();
            b[j][i] = v;
        }
    }
    Ok(b)
}

/// Recovers the metric and volume form of a 3-form.
///
/// With `g_ij √det g = b_ij` one gets `det b = (det g)^{9/2}`, hence
/// `g = b / det(b)^{1/9}` and `√det g = det(b)^{1/9}`.
pub fn metric_from_phi(phi: &AlternatingForm) -> Result<(MetricData, AlternatingForm)> {
    let b = phi_bilinear(phi)?;
    let bm = Matrix7::from_fn(|i, j| b[i][j]);
    let det = bm.determinant();
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::NotPositive(format!("det(b) = {det:e}")));
    }
    let scale = det.powf(1.0 / 9.0);
    let g = to_array(&(bm / scale));
    let metric = MetricData::new(g).map_err(|_| Error::NotPositive("recovered metric is not definite".into()))?;
    Ok((metric, AlternatingForm::top(scale)))
}

/// A G₂-structure at a point: φ with its metric, `ψ = ∗φ` and volume form.
#[derive(Debug, Clone)]
pub struct G2Point<S: Scalar = f64> {
    phi: AlternatingForm<S>,
    metric: MetricData<S>,
    psi: AlternatingForm<S>,
    vol: AlternatingForm<S>,
    decomposition: OnceLock<Decomposition>,
}

impl<S: Scalar> G2Point<S> {
    /// The flat model `(φ₀, δ)`.
    pub fn flat() -> Self {
        let phi = standard_phi::<S>();
        let metric = MetricData::<S>::euclidean();
        let psi = hodge_star(&phi, &metric);
        G2Point {
            vol: AlternatingForm::top(S::one()),
            phi,
            metric,
            psi,
            decomposition: OnceLock::new(),
        }
    }

    pub fn phi(&self) -> &AlternatingForm<S> {
        &self.phi
    }

    pub fn metric(&self) -> &MetricData<S> {
        &self.metric
    }

    pub fn psi(&self) -> &AlternatingForm<S> {
        &self.psi
    }

    pub fn vol(&self) -> &AlternatingForm<S> {
        &self.vol
    }
}

impl G2Point<f64> {
    /// Fails when φ is not a positive 3-form.
    pub fn from_phi(phi: AlternatingForm) -> Result<Self> {
        let (metric, vol) = metric_from_phi(&phi)?;
        let psi = hodge_star(&phi, &metric);
        Ok(G2Point {
            phi,
            metric,
            psi,
            vol,
            decomposition: OnceLock::new(),
        })
    }

    /// Cached projectors onto the type components at this point.
    pub fn decomposition(&self) -> &Decomposition {
        self.decomposition.get_or_init(|| Decomposition::new(self))
    }

    pub fn project_2form(&self, eta: &AlternatingForm) -> Result<TwoFormParts> {
        self.decomposition().project_2form(eta)
    }

    pub fn project_3form(&self, gamma: &AlternatingForm) -> Result<ThreeFormParts> {
        self.decomposition().project_3form(self, gamma)
    }

    pub fn i_phi_inverse(&self, gamma: &AlternatingForm) -> Result<SymmetricTwoTensor> {
        self.decomposition().i_phi_inverse(self, gamma)
    }
}

/// A symmetric bilinear form with lower indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTwoTensor<S: Scalar = f64> {
    h: Mat7<S>,
}

impl<S: Scalar> SymmetricTwoTensor<S> {
    /// Requires `h = hᵀ` exactly.
    pub fn new(h: Mat7<S>) -> Result<Self> {
        for i in 0..DIM {
            for j in 0..i {
                if h[i][j] != h[j][i] {
                    return Err(Error::ValenceMismatch(format!("h[{i}][{j}] != h[{j}][{i}]")));
                }
            }
        }
        Ok(SymmetricTwoTensor { h })
    }

    /// `(m + mᵀ) / 2`.
    pub fn symmetrized(m: &Mat7<S>) -> Self {
        let half = S::from_ratio(1, 2);
        SymmetricTwoTensor {
            h: std::array::from_fn(|i| std::array::from_fn(|j| (m[i][j].clone() + m[j][i].clone()) * half.clone())),
        }
    }

    pub fn zero() -> Self {
        SymmetricTwoTensor {
            h: std::array::from_fn(|_| std::array::from_fn(|_| S::zero())),
        }
    }

    pub fn metric(m: &MetricData<S>) -> Self {
        SymmetricTwoTensor { h: m.g().clone() }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.h[i][j]
    }

    pub fn matrix(&self) -> &Mat7<S> {
        &self.h
    }

    /// `tr_g h = g^{ij} h_ij`.
    pub fn trace(&self, m: &MetricData<S>) -> S {
        let gi = m.g_inv();
        let mut acc = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                acc = acc + gi[i][j].clone() * self.h[i][j].clone();
            }
        }
        acc
    }

    /// `⟨U, V⟩ = U^{ij} V_ij`.
    pub fn inner(&self, other: &Self, m: &MetricData<S>) -> S {
        let a = mixed(&self.h, m);
        let b = mixed(&other.h, m);
        let mut acc = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                acc = acc + a[i][j].clone() * b[j][i].clone();
            }
        }
        acc
    }

    pub fn scaled(&self, s: &S) -> Self {
        SymmetricTwoTensor {
            h: std::array::from_fn(|i| std::array::from_fn(|j| self.h[i][j].clone() * s.clone())),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SymmetricTwoTensor {
            h: std::array::from_fn(|i| std::array::from_fn(|j| self.h[i][j].clone() + other.h[i][j].clone())),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-S::one()))
    }

    pub fn max_abs(&self) -> f64 {
        self.h.iter().flatten().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl SymmetricTwoTensor<f64> {
    /// Eigenvalues of `h` relative to `g`, ascending.
    pub fn eigenvalues(&self, m: &MetricData) -> [f64; DIM] {
        let l = m.matrix().cholesky().expect("metric is definite").l();
        let li = l.try_inverse().expect("triangular factor invertible");
        let hm = Matrix7::from_fn(|i, j| self.h[i][j]);
        let a = li * hm * li.transpose();
        let mut ev: Vec<f64> = SymmetricEigen::new((a + a.transpose()) * 0.5)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        std::array::from_fn(|i| ev[i])
    }
}

/// `h_i^l = h_ia g^{al}`.
fn mixed<S: Scalar>(h: &Mat7<S>, m: &MetricData<S>) -> Mat7<S> {
    if m.is_identity() {
        return h.clone();
    }
    let gi = m.g_inv();
    std::array::from_fn(|i| {
        std::array::from_fn(|l| (0..DIM).fold(S::zero(), |acc, a| acc + h[i][a].clone() * gi[a][l].clone()))
    })
}

/// `i_φ(h)_ijk = h_i^l φ_ljk + h_j^l φ_ilk + h_k^l φ_ijl`, so `i_φ(g) = 3φ`.
pub fn i_phi<S: Scalar>(h: &SymmetricTwoTensor<S>, pt: &G2Point<S>) -> AlternatingForm<S> {
    i_phi_raw(h, &pt.phi, &pt.metric)
}

pub(crate) fn i_phi_raw<S: Scalar>(
    h: &SymmetricTwoTensor<S>,
    phi: &AlternatingForm<S>,
    metric: &MetricData<S>,
) -> AlternatingForm<S> {
    let hm = mixed(&h.h, metric);
    let d = phi.dense();
    let at = |a: usize, b: usize, c: usize| &d[a * 49 + b * 7 + c];
    let mut out = AlternatingForm::zero(3);
    let mut p = 0;
    for i in 0..DIM {
        for j in i + 1..DIM {
            for k in j + 1..DIM {
                let mut s = S::zero();
                for l in 0..DIM {
                    s = s
                        + hm[i][l].clone() * at(l, j, k).clone()
                        + hm[j][l].clone() * at(i, l, k).clone()
                        + hm[k][l].clone() * at(i, j, l).clone();
                }
                out.coeffs_mut()[p] = s;
                p += 1;
            }
        }
    }
    out
}

/// `φ_ljk φ_p^{jk}` as a matrix in `(l, p)`.
pub fn phi_contraction<S: Scalar>(pt: &G2Point<S>) -> Mat7<S> {
    let d = pt.phi.dense();
    let gi = pt.metric.g_inv();
    let raised: Vec<S> = if pt.metric.is_identity() {
        d.clone()
    } else {
        // φ_p^{jk} = φ_pab g^{aj} g^{bk}
        let mut half = vec![S::zero(); 343];
        for p in 0..DIM {
            for a in 0..DIM {
                for k in 0..DIM {
                    half[p * 49 + a * 7 + k] = (0..DIM).fold(S::zero(), |acc, b| {
                        acc + d[p * 49 + a * 7 + b].clone() * gi[b][k].clone()
                    });
                }
            }
        }
        let mut full = vec![S::zero(); 343];
        for p in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    full[p * 49 + j * 7 + k] = (0..DIM).fold(S::zero(), |acc, a| {
                        acc + half[p * 49 + a * 7 + k].clone() * gi[a][j].clone()
                    });
                }
            }
        }
        full
    };
    std::array::from_fn(|l| {
        std::array::from_fn(|p| {
            (0..49).fold(S::zero(), |acc, jk| {
                acc + d[l * 49 + jk].clone() * raised[p * 49 + jk].clone()
            })
        })
    })
}

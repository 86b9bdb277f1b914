//! Torsion of a discretised closed G₂-structure and the field identities it
//! satisfies.

mod identities;
mod ladder;
mod pinch;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{interior_basis, raise_form, AlternatingForm, Matrix7, DIM};
use crate::fields::{covariant_derivative, curvature, CurvatureData, TensorField, Valence};
use crate::g2::{G2Point, SymmetricTwoTensor};

pub use identities::{
    verify_closed, verify_laplacian_relation, verify_master_identity, verify_ricci_formula,
    verify_scalar_torsion_identity, FieldResiduals, LaplacianResiduals, MasterResiduals, RicciResiduals,
    ScalarTorsionResiduals,
};
pub use ladder::{convergence_ladder, ConvergenceLevel, Ladder, LADDER_RATIO, ROUNDING_FLOOR};
pub use pinch::{ricci_bounds_hold, synthetic_einstein_residual, t2_max_eigenvalue, verify_pinch_bound, PinchReport};

/// A 3-form field together with the pointwise G₂ data at every stored point.
#[derive(Debug, Clone)]
pub struct G2Field {
    phi: TensorField,
    points: Vec<G2Point>,
    metric: TensorField,
    psi: TensorField,
    vol: TensorField,
}

impl G2Field {
    /// Recovers metric, ψ and volume at every point; rejects non-positive φ with
    /// the first offending grid index.
    pub fn from_phi(phi: &TensorField) -> Result<Self> {
        if phi.valence() != Valence::Form(3) {
            return Err(Error::ValenceMismatch(format!(
                "expected a 3-form field, found {:?}",
                phi.valence()
            )));
        }
        let results: Vec<Result<G2Point>> = (0..phi.point_count())
            .into_par_iter()
            .map(|p| {
                let form = AlternatingForm::from_coeffs(3, phi.point_values(p).to_vec())?;
                G2Point::from_phi(form)
            })
            .collect();
        let mut points = Vec::with_capacity(results.len());
        for (p, r) in results.into_iter().enumerate() {
            match r {
                Ok(pt) => points.push(pt),
                Err(e) => {
                    return Err(Error::NonPositiveAt {
                        point: phi.grid_index_of(p),
                        reason: e.to_string(),
                    })
                }
            }
        }
        let metric = phi.map(Valence::METRIC, |_, _| {})?;
        let metric = fill(&metric, &points, |pt, out| {
            for i in 0..DIM {
                out[i * DIM..(i + 1) * DIM].copy_from_slice(&pt.metric().g()[i]);
            }
        });
        let psi = fill(&phi.map(Valence::Form(4), |_, _| {})?, &points, |pt, out| {
            out.copy_from_slice(pt.psi().coeffs())
        });
        let vol = fill(&phi.map(Valence::SCALAR, |_, _| {})?, &points, |pt, out| {
            out[0] = *pt.metric().vol_coeff()
        });
        Ok(G2Field {
            phi: phi.clone(),
            points,
            metric,
            psi,
            vol,
        })
    }

    pub fn phi(&self) -> &TensorField {
        &self.phi
    }

    pub fn metric(&self) -> &TensorField {
        &self.metric
    }

    pub fn psi(&self) -> &TensorField {
        &self.psi
    }

    /// `√det g` per point.
    pub fn vol(&self) -> &TensorField {
        &self.vol
    }

    /// The pointwise structure at a chart grid index covered by φ.
    pub fn point_at(&self, index: &[usize; DIM]) -> &G2Point {
        let p = self.phi.offset_of(index).expect("grid index covered by the structure");
        &self.points[p]
    }

    /// `min λ_min(g) / λ_max(g)` over all points.
    pub fn positivity_margin(&self) -> f64 {
        self.points
            .iter()
            .map(|pt| {
                let ev = pt.metric().matrix().symmetric_eigenvalues();
                ev.min() / ev.max()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn fill<F>(shape: &TensorField, points: &[G2Point], f: F) -> TensorField
where
    F: Fn(&G2Point, &mut [f64]) + Sync,
{
    let c = shape.components();
    let mut values = shape.values().to_vec();
    values
        .par_chunks_mut(c)
        .zip(points.par_iter())
        .for_each(|(out, pt)| f(pt, out));
    shape.with_values(values)
}

/// Torsion fields on the common interior of `∇φ`.
#[derive(Debug, Clone)]
pub struct TorsionData {
    /// `T_ij` as computed, before antisymmetrisation.
    pub t: TensorField,
    /// `τ = −2T`, from the antisymmetric part of `T`.
    pub tau: TensorField,
    /// `|T|²_g = T_ij T^ij`.
    pub norm_t2: TensorField,
    /// `(T²)_ij = T_i^l T_lj`, symmetrised.
    pub t2: TensorField,
}

pub(crate) fn matrix(v: &[f64]) -> Matrix7 {
    Matrix7::from_fn(|i, j| v[i * DIM + j])
}

/// `T_ij = (1/24) ∇_i φ_abc ψ_j^{abc} = (1/4) ⟨∇_i φ, ι_{e_j} ψ⟩`.
pub fn torsion(field: &G2Field, christoffel: &TensorField) -> Result<TorsionData> {
    let nabla = covariant_derivative(&field.phi, christoffel)?;
    let n3 = 35;
    let t = TensorField::zip_map(&[&nabla], Valence::METRIC, |g, ins, out| {
        let pt = field.point_at(&g);
        for j in 0..DIM {
            let slice = interior_basis(j, pt.psi()).expect("degree 4");
            let raised = raise_form(&slice, pt.metric());
            for i in 0..DIM {
                let row = &ins[0][i * n3..(i + 1) * n3];
                out[i * DIM + j] = 0.25 * row.iter().zip(&raised).map(|(a, b)| a * b).sum::<f64>();
            }
        }
    })?;
    let tau = t.map(Valence::Form(2), |v, out| {
        let mut p = 0;
        for i in 0..DIM {
            for j in i + 1..DIM {
                out[p] = -(v[i * DIM + j] - v[j * DIM + i]);
                p += 1;
            }
        }
    })?;
    let norm_t2 = TensorField::zip_map(&[&t], Valence::SCALAR, |g, ins, out| {
        let gi = field.point_at(&g).metric().inverse_matrix();
        let tm = matrix(ins[0]);
        out[0] = (tm.transpose() * gi * tm * gi).trace();
    })?;
    let t2 = TensorField::zip_map(&[&t], Valence::METRIC, |g, ins, out| {
        let gi = field.point_at(&g).metric().inverse_matrix();
        let tm = matrix(ins[0]);
        let sq = tm * gi * tm;
        let sym = (sq + sq.transpose()) * 0.5;
        for i in 0..DIM {
            for j in 0..DIM {
                out[i * DIM + j] = sym[(i, j)];
            }
        }
    })?;
    Ok(TorsionData { t, tau, norm_t2, t2 })
}

/// Torsion alone, from a 3-form field.
pub fn torsion_from_phi(phi: &TensorField) -> Result<TorsionData> {
    let field = G2Field::from_phi(phi)?;
    let gamma = crate::fields::levi_civita(field.metric())?;
    torsion(&field, &gamma)
}

/// Structure, curvature and torsion of one 3-form field.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub field: G2Field,
    pub curvature: CurvatureData,
    pub torsion: TorsionData,
}

pub fn analyze(phi: &TensorField) -> Result<Analysis> {
    let field = G2Field::from_phi(phi)?;
    let curvature = curvature(field.metric())?;
    let torsion = torsion(&field, &curvature.christoffel)?;
    Ok(Analysis {
        field,
        curvature,
        torsion,
    })
}

/// Axes along which `phi` is sampled (not stored uniform); every axis when
/// there is none.
pub fn varying_axes(phi: &TensorField) -> Vec<usize> {
    let active: Vec<usize> = (0..DIM).filter(|&a| phi.is_active(a)).collect();
    if active.is_empty() {
        (0..DIM).collect()
    } else {
        active
    }
}

/// Largest resolution over [`varying_axes`].
pub fn level_resolution(phi: &TensorField) -> usize {
    varying_axes(phi)
        .into_iter()
        .map(|a| phi.chart().resolution()[a])
        .max()
        .unwrap_or(0)
}

pub(crate) fn symmetric_at(v: &[f64]) -> SymmetricTwoTensor {
    SymmetricTwoTensor::symmetrized(&std::array::from_fn(|i| std::array::from_fn(|j| v[i * DIM + j])))
}

pub(crate) fn form_at(degree: usize, v: &[f64]) -> AlternatingForm {
    AlternatingForm::from_coeffs(degree, v.to_vec()).expect("field valence matches degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Chart;
    use crate::g2::standard_phi;

    fn flat_field() -> TensorField {
        let c = Chart::periodic([6; DIM], [1.0; DIM]).unwrap();
        TensorField::constant(&c, Valence::Form(3), standard_phi::<f64>().coeffs()).unwrap()
    }

    #[test]
    fn flat_torsion_is_zero() {
        let td = torsion_from_phi(&flat_field()).unwrap();
        assert_eq!(td.t.max_abs(), 0.0);
        assert_eq!(td.norm_t2.max_abs(), 0.0);
    }

    #[test]
    fn flat_margin_is_one() {
        let f = G2Field::from_phi(&flat_field()).unwrap();
        assert!((f.positivity_margin() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_phi_reports_point() {
        let c = Chart::periodic([6; DIM], [1.0; DIM]).unwrap();
        let phi = AlternatingForm::<f64>::basis(&[0, 1, 2]).unwrap();
        let f = TensorField::constant(&c, Valence::Form(3), phi.coeffs()).unwrap();
        assert!(matches!(G2Field::from_phi(&f), Err(Error::NonPositiveAt { .. })));
    }
}

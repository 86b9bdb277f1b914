use super::{form_at, matrix, symmetric_at, Analysis, G2Field, TorsionData};
use crate::error::Result;
use crate::exterior::{form_inner, form_power, hodge_star, wedge, AlternatingForm, DIM};
use crate::fields::{exterior_derivative, CurvatureData, TensorField, Valence};
use crate::g2::{i_phi, G2Point, SymmetricTwoTensor};
use crate::report::anchors;

fn norm(a: &AlternatingForm, pt: &G2Point) -> f64 {
    form_inner(a, a, pt.metric()).expect("same degree").max(0.0).sqrt()
}

fn tensor_norm(h: &SymmetricTwoTensor, pt: &G2Point) -> f64 {
    h.inner(h, pt.metric()).max(0.0).sqrt()
}

/// Scalar field of pointwise residuals, then its maximum.
fn pointwise_max<F>(field: &G2Field, inputs: &[&TensorField], f: F) -> Result<(TensorField, f64)>
where
    F: Fn(&G2Point, &[&[f64]]) -> f64 + Sync,
{
    let r = TensorField::zip_map(inputs, Valence::SCALAR, |g, ins, out| {
        out[0] = f(field.point_at(&g), ins);
    })?;
    let m = r.max_abs();
    Ok((r, m))
}

/// Largest coefficient of `dφ`.
pub fn verify_closed(phi: &TensorField) -> Result<f64> {
    Ok(exterior_derivative(phi)?.max_abs())
}

#[derive(Debug, Clone)]
pub struct ScalarTorsionResiduals {
    /// `R + |T|²` per point.
    pub residual: TensorField,
    pub max: f64,
    /// `max ||T|² − ½|τ|²|`.
    pub tau_half: f64,
}

pub fn verify_scalar_torsion_identity(
    field: &G2Field,
    td: &TorsionData,
    cd: &CurvatureData,
) -> Result<ScalarTorsionResiduals> {
    let (residual, max) = pointwise_max(field, &[&cd.scalar, &td.norm_t2], |_, v| v[0][0] + v[1][0])?;
    let (_, tau_half) = pointwise_max(field, &[&td.norm_t2, &td.tau], |pt, v| {
        let tau = form_at(2, v[1]);
        v[0][0] - 0.5 * form_inner(&tau, &tau, pt.metric()).expect("2-forms")
    })?;
    Ok(ScalarTorsionResiduals {
        residual,
        max,
        tau_half,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct LaplacianResiduals {
    /// `max |dτ − Δφ|` with `Δφ = d δφ`, `δφ = −∗d∗φ`.
    pub laplacian: f64,
    /// `max |π₇(dτ)|`.
    pub seven: f64,
    /// `max |π₁(dτ) − (1/7)|τ|² φ|`.
    pub one: f64,
}

pub fn verify_laplacian_relation(field: &G2Field, td: &TorsionData) -> Result<LaplacianResiduals> {
    let dtau = exterior_derivative(&td.tau)?;
    let dpsi = exterior_derivative(field.psi())?;
    let codiff = TensorField::zip_map(&[&dpsi], Valence::Form(2), |g, ins, out| {
        let pt = field.point_at(&g);
        let s = hodge_star(&form_at(5, ins[0]), pt.metric());
        for (o, v) in out.iter_mut().zip(s.coeffs()) {
            *o = -v;
        }
    })?;
    let lap = exterior_derivative(&codiff)?;
    let (_, laplacian) = pointwise_max(field, &[&dtau, &lap], |pt, v| {
        norm(&(&form_at(3, v[0]) - &form_at(3, v[1])), pt)
    })?;
    let parts = TensorField::zip_map(&[&dtau, &td.tau], Valence::Form(1), |g, ins, out| {
        let pt = field.point_at(&g);
        let p = pt.project_3form(&form_at(3, ins[0])).expect("degree 3");
        let tau = form_at(2, ins[1]);
        let t2 = form_inner(&tau, &tau, pt.metric()).expect("2-forms");
        out[0] = norm(&p.seven, pt);
        out[1] = norm(&(&p.one - &pt.phi().scaled(&(t2 / 7.0))), pt);
    })?;
    let max_at = |c: usize| (0..parts.point_count()).fold(0.0f64, |m, p| m.max(parts.point_values(p)[c]));
    Ok(LaplacianResiduals {
        laplacian,
        seven: max_at(0),
        one: max_at(1),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct RicciResiduals {
    /// `max |i_φ(Ric) + dτ − ½∗(τ∧τ)|`.
    pub direct: f64,
    /// `max |i_φ⁻¹(dτ) − (−Ric + R g/3 − 2T²)|`.
    pub trace_form: f64,
    /// `max |i_φ(T²) + ¼∗(τ²) − ½Rφ|`.
    pub i_phi_t2: f64,
}

pub fn verify_ricci_formula(field: &G2Field, td: &TorsionData, cd: &CurvatureData) -> Result<RicciResiduals> {
    let dtau = exterior_derivative(&td.tau)?;
    let (_, direct) = pointwise_max(field, &[&cd.ricci, &dtau, &td.tau], |pt, v| {
        let lhs = i_phi(&symmetric_at(v[0]), pt);
        let tau = form_at(2, v[2]);
        let sq = hodge_star(&form_power(&tau, 2).expect("2-form"), pt.metric());
        let rhs = &sq.scaled(&0.5) - &form_at(3, v[1]);
        norm(&(&lhs - &rhs), pt)
    })?;
    let (_, trace_form) = pointwise_max(field, &[&dtau, &cd.ricci, &cd.scalar, &td.t2], |pt, v| {
        let (h, _) = pt
            .decomposition()
            .i_phi_inverse_lenient(pt, &form_at(3, v[0]))
            .expect("degree 3");
        let g = SymmetricTwoTensor::metric(pt.metric());
        let rhs = g
            .scaled(&(v[2][0] / 3.0))
            .sub(&symmetric_at(v[1]))
            .sub(&symmetric_at(v[3]).scaled(&2.0));
        tensor_norm(&h.sub(&rhs), pt)
    })?;
    let (_, i_phi_t2) = pointwise_max(field, &[&td.t2, &td.tau, &cd.scalar], |pt, v| {
        let lhs = i_phi(&symmetric_at(v[0]), pt);
        let tau = form_at(2, v[1]);
        let sq = hodge_star(&form_power(&tau, 2).expect("2-form"), pt.metric());
        let rhs = &pt.phi().scaled(&(0.5 * v[2][0])) - &sq.scaled(&0.25);
        norm(&(&lhs - &rhs), pt)
    })?;
    Ok(RicciResiduals {
        direct,
        trace_form,
        i_phi_t2,
    })
}

#[derive(Debug, Clone)]
pub struct MasterResiduals {
    /// `R_ij T^il T_l^j` per point.
    pub rtt: TensorField,
    /// `max |24 R_ij T^il T_l^j − ∗d(τ³)|`.
    pub direct: f64,
    /// `max |∗d(τ³) − 3∗(dτ∧τ²)|`.
    pub expanded: f64,
    /// `|∫ R_ij T^il T_l^j vol|` over the covered box.
    pub integral: f64,
    /// `∫ |R_ij T^il T_l^j| vol`, the natural scale of `integral`.
    pub integral_scale: f64,
}

/// `R_ij T^il T_l^j = ⟨Ric, T²⟩_g`.
pub(crate) fn rtt_field(field: &G2Field, td: &TorsionData, cd: &CurvatureData) -> Result<TensorField> {
    TensorField::zip_map(&[&cd.ricci, &td.t2], Valence::SCALAR, |g, ins, out| {
        let gi = field.point_at(&g).metric().inverse_matrix();
        out[0] = (matrix(ins[0]) * gi * matrix(ins[1]) * gi).trace();
    })
}

pub fn verify_master_identity(field: &G2Field, td: &TorsionData, cd: &CurvatureData) -> Result<MasterResiduals> {
    let rtt = rtt_field(field, td, cd)?;
    let cube = td.tau.map(Valence::Form(6), |v, out| {
        out.copy_from_slice(form_power(&form_at(2, v), 3).expect("2-form").coeffs())
    })?;
    let dcube = exterior_derivative(&cube)?;
    let dtau = exterior_derivative(&td.tau)?;
    let star_top = |pt: &G2Point, top: f64| top / pt.metric().vol_coeff();
    let (_, direct) = pointwise_max(field, &[&rtt, &dcube], |pt, v| 24.0 * v[0][0] - star_top(pt, v[1][0]))?;
    let (_, expanded) = pointwise_max(field, &[&dcube, &dtau, &td.tau], |pt, v| {
        let tau = form_at(2, v[2]);
        let sq = form_power(&tau, 2).expect("2-form");
        let e = wedge(&form_at(3, v[1]), &sq).expect("3 + 4 = 7").coeffs()[0];
        star_top(pt, v[0][0]) - 3.0 * star_top(pt, e)
    })?;
    let weighted = TensorField::zip_map(&[&rtt, field.vol()], Valence::SCALAR, |_, ins, out| {
        out[0] = ins[0][0] * ins[1][0];
    })?;
    let integral = weighted.integral(|v| v[0]).abs();
    let integral_scale = weighted.integral(|v| v[0].abs());
    Ok(MasterResiduals {
        rtt,
        direct,
        expanded,
        integral,
        integral_scale,
    })
}

/// Every field-level residual of one structure at one resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldResiduals {
    pub spacing: f64,
    pub closed: f64,
    pub antisymmetry: f64,
    pub omega7_tau: f64,
    pub scalar_torsion: f64,
    pub tau_half: f64,
    pub laplacian: f64,
    pub dtau_seven: f64,
    pub dtau_one: f64,
    pub ricci: f64,
    pub ricci_trace_form: f64,
    pub i_phi_t2: f64,
    pub master: f64,
    pub master_expanded: f64,
    pub master_integral: f64,
    pub master_integral_scale: f64,
    pub t2_max_eigenvalue: f64,
    pub ricci_asymmetry: f64,
    /// `max |T|²`, the size of the torsion.
    pub torsion_scale: f64,
    /// `max |T|`, Frobenius in `g`.
    pub torsion_norm: f64,
}

impl FieldResiduals {
    pub fn compute(a: &Analysis) -> Result<Self> {
        let (field, td, cd) = (&a.field, &a.torsion, &a.curvature);
        let (_, antisymmetry) = pointwise_max(field, &[&td.t], |pt, v| {
            let t = matrix(v[0]);
            let s = (t + t.transpose()) * 0.5;
            let gi = pt.metric().inverse_matrix();
            (s.transpose() * gi * s * gi).trace().max(0.0).sqrt()
        })?;
        let (_, omega7_tau) = pointwise_max(field, &[&td.tau], |pt, v| {
            norm(&pt.project_2form(&form_at(2, v[0])).expect("degree 2").seven, pt)
        })?;
        let st = verify_scalar_torsion_identity(field, td, cd)?;
        let lap = verify_laplacian_relation(field, td)?;
        let ric = verify_ricci_formula(field, td, cd)?;
        let master = verify_master_identity(field, td, cd)?;
        let (eig, _) = pointwise_max(field, &[&td.t2], |pt, v| {
            symmetric_at(v[0]).eigenvalues(pt.metric())[DIM - 1]
        })?;
        let t2_max_eigenvalue = eig.max_over(|v| v[0]);
        Ok(FieldResiduals {
            spacing: super::varying_axes(field.phi())
                .into_iter()
                .map(|a| field.phi().chart().spacing()[a])
                .fold(0.0, f64::max),
            closed: verify_closed(field.phi())?,
            antisymmetry,
            omega7_tau,
            scalar_torsion: st.max,
            tau_half: st.tau_half,
            laplacian: lap.laplacian,
            dtau_seven: lap.seven,
            dtau_one: lap.one,
            ricci: ric.direct,
            ricci_trace_form: ric.trace_form,
            i_phi_t2: ric.i_phi_t2,
            master: master.direct,
            master_expanded: master.expanded,
            master_integral: master.integral,
            master_integral_scale: master.integral_scale,
            t2_max_eigenvalue,
            ricci_asymmetry: cd.ricci_asymmetry,
            torsion_scale: td.norm_t2.max_abs(),
            torsion_norm: td.norm_t2.max_abs().sqrt(),
        })
    }

    /// The residuals that converge at second order, with their anchors.
    pub fn convergent(&self) -> Vec<(&'static str, &'static str, f64)> {
        vec![
            ("field.closed", anchors::CLOSED, self.closed),
            (
                "field.torsion_antisymmetry",
                anchors::TORSION_ANTISYMMETRIC,
                self.antisymmetry,
            ),
            ("field.tau_omega7", anchors::OMEGA14_SIGN, self.omega7_tau),
            ("field.scalar_torsion", anchors::SCALAR_TORSION, self.scalar_torsion),
            ("field.laplacian", anchors::LAPLACIAN, self.laplacian),
            ("field.dtau_omega7", anchors::DTAU_SPLIT, self.dtau_seven),
            ("field.dtau_omega1", anchors::DTAU_SPLIT, self.dtau_one),
            ("field.ricci_formula", anchors::RICCI_FORMULA, self.ricci),
            (
                "field.ricci_trace_form",
                anchors::RICCI_TRACE_FORM,
                self.ricci_trace_form,
            ),
            ("field.i_phi_t2", anchors::IPHI_T2, self.i_phi_t2),
            ("field.master_identity", anchors::MASTER, self.master),
            ("field.master_expanded", anchors::MASTER, self.master_expanded),
            ("field.master_integral", anchors::MASTER_INTEGRAL, self.master_integral),
        ]
    }
}

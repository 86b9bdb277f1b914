use nalgebra::SMatrix;

use super::{TensorField, Valence};
use crate::error::{Error, Result};
use crate::exterior::{form_len, mask_indices, sort_indices, tables, Matrix7, DIM};

const D2: usize = DIM * DIM;
const D3: usize = D2 * DIM;

fn matrix(v: &[f64]) -> Matrix7 {
    SMatrix::from_fn(|i, j| v[i * DIM + j])
}

fn inverse(v: &[f64]) -> Option<Matrix7> {
    matrix(v).cholesky().map(|c| c.inverse())
}

fn require(t: &TensorField, v: Valence, what: &str) -> Result<()> {
    if t.valence() != v {
        return Err(Error::ValenceMismatch(format!(
            "{what}: expected {v:?}, found {:?}",
            t.valence()
        )));
    }
    Ok(())
}

/// Partials along active axes, zero elsewhere: `(slot per axis, fields)`.
fn active_partials(t: &TensorField) -> Result<([usize; DIM], Vec<TensorField>)> {
    let mut slot = [usize::MAX; DIM];
    let mut out = Vec::new();
    for a in 0..DIM {
        if t.is_active(a) {
            slot[a] = out.len();
            out.push(t.partial(a)?);
        }
    }
    Ok((slot, out))
}

/// Christoffel symbols `Γ^k_ij` of a metric field, stored as `[k][i][j]`.
pub fn levi_civita(g: &TensorField) -> Result<TensorField> {
    require(g, Valence::METRIC, "levi_civita")?;
    for p in 0..g.point_count() {
        if inverse(g.point_values(p)).is_none() {
            return Err(Error::IndefiniteMetric(g.grid_index_of(p)));
        }
    }
    let (slot, dg) = active_partials(g)?;
    let mut inputs = vec![g];
    inputs.extend(dg.iter());
    TensorField::zip_map(&inputs, Valence::Tensor { up: 1, down: 2 }, |_, ins, out| {
        let gi = inverse(ins[0]).expect("checked above");
        // D[a][b][c] = ∂_a g_bc
        let d = |a: usize, b: usize, c: usize| {
            let s = slot[a];
            if s == usize::MAX {
                0.0
            } else {
                ins[1 + s][b * DIM + c]
            }
        };
        let mut lower = [0.0; D3];
        for l in 0..DIM {
            for i in 0..DIM {
                for j in i..DIM {
                    let v = 0.5 * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                    lower[l * D2 + i * DIM + j] = v;
                    lower[l * D2 + j * DIM + i] = v;
                }
            }
        }
        for k in 0..DIM {
            for ij in 0..D2 {
                out[k * D2 + ij] = (0..DIM).map(|l| gi[(k, l)] * lower[l * D2 + ij]).sum();
            }
        }
    })
}

/// Correction terms of `∇` on packed k-forms: for each output coefficient
/// `P`, slot value `s` and replacement `m`, the coefficient `Q` with its sign.
fn form_corrections(k: usize) -> Vec<(usize, usize, usize, usize, bool)> {
    let t = tables();
    let mut out = Vec::new();
    for (p, &mask) in t.masks(k).iter().enumerate() {
        let idx: Vec<usize> = mask_indices(mask).collect();
        for r in 0..k {
            for m in 0..DIM {
                let mut replaced = idx.clone();
                replaced[r] = m;
                if let Some((qmask, negative)) = sort_indices(&replaced) {
                    out.push((p, idx[r], m, t.position(qmask), negative));
                }
            }
        }
    }
    out
}

/// `∇_i t`. Forms become [`Valence::FormGradient`]; tensors gain a covariant
/// index placed first among the lower indices.
pub fn covariant_derivative(t: &TensorField, gamma: &TensorField) -> Result<TensorField> {
    require(gamma, Valence::Tensor { up: 1, down: 2 }, "connection")?;
    let (slot, dt) = active_partials(t)?;
    let mut inputs = vec![t, gamma];
    inputs.extend(dt.iter());
    let partial = move |ins: &[&[f64]], i: usize, c: usize| {
        let s = slot[i];
        if s == usize::MAX {
            0.0
        } else {
            ins[2 + s][c]
        }
    };
    match t.valence() {
        Valence::Form(k) => {
            let n = form_len(k);
            let corr = form_corrections(k);
            TensorField::zip_map(&inputs, Valence::FormGradient(k), |_, ins, out| {
                let (a, g) = (ins[0], ins[1]);
                for i in 0..DIM {
                    let row = &mut out[i * n..(i + 1) * n];
                    for (p, v) in row.iter_mut().enumerate() {
                        *v = partial(ins, i, p);
                    }
                    for &(p, s, m, q, negative) in &corr {
                        let c = g[m * D2 + i * DIM + s] * a[q];
                        row[p] += if negative { c } else { -c };
                    }
                }
            })
        }
        Valence::Tensor { up, down } => {
            let rank = up + down;
            if rank + 1 > 4 {
                return Err(Error::ValenceMismatch("covariant derivative rank exceeds 4".into()));
            }
            let pow: Vec<usize> = (0..=rank).map(|r| DIM.pow(r as u32)).collect();
            TensorField::zip_map(&inputs, Valence::Tensor { up, down: down + 1 }, |_, ins, out| {
                let (a, g) = (ins[0], ins[1]);
                let mut idx = vec![0usize; rank];
                for c in 0..pow[rank] {
                    let mut r = c;
                    for s in (0..rank).rev() {
                        idx[s] = r % DIM;
                        r /= DIM;
                    }
                    let (hi, lo) = (c / pow[down], c % pow[down]);
                    for i in 0..DIM {
                        let mut v = partial(ins, i, c);
                        for s in 0..rank {
                            let weight = pow[rank - 1 - s];
                            let base = c - idx[s] * weight;
                            for m in 0..DIM {
                                let tm = a[base + m * weight];
                                if s < up {
                                    v += g[idx[s] * D2 + i * DIM + m] * tm;
                                } else {
                                    v -= g[m * D2 + i * DIM + idx[s]] * tm;
                                }
                            }
                        }
                        out[(hi * DIM + i) * pow[down] + lo] = v;
                    }
                }
            })
        }
        other => Err(Error::ValenceMismatch(format!("covariant derivative of {other:?}"))),
    }
}

/// Curvature of a metric field.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    /// `Γ^k_ij` as `[k][i][j]`.
    pub christoffel: TensorField,
    /// Symmetrised `Ric_ik = R^l_ilk`.
    pub ricci: TensorField,
    pub scalar: TensorField,
    /// `max |Ric_ik − Ric_ki| / max |Ric|` before symmetrisation.
    pub ricci_asymmetry: f64,
}

/// `R^l_ijk = ∂_j Γ^l_ki − ∂_k Γ^l_ji + Γ^l_jm Γ^m_ki − Γ^l_km Γ^m_ji`.
fn riemann_component(gm: &[f64], dg: &impl Fn(usize, usize) -> f64, l: usize, i: usize, j: usize, k: usize) -> f64 {
    let mut v = dg(j, l * D2 + k * DIM + i) - dg(k, l * D2 + j * DIM + i);
    for m in 0..DIM {
        v += gm[l * D2 + j * DIM + m] * gm[m * D2 + k * DIM + i] - gm[l * D2 + k * DIM + m] * gm[m * D2 + j * DIM + i];
    }
    v
}

fn with_partials<F>(christoffel: &TensorField, valence: Valence, f: F) -> Result<TensorField>
where
    F: Fn(&[f64], &dyn Fn(usize, usize) -> f64, &mut [f64]) + Sync,
{
    let (slot, dgam) = active_partials(christoffel)?;
    let mut inputs = vec![christoffel];
    inputs.extend(dgam.iter());
    TensorField::zip_map(&inputs, valence, |_, ins, out| {
        let dg = |a: usize, c: usize| match slot[a] {
            usize::MAX => 0.0,
            s => ins[1 + s][c],
        };
        f(ins[0], &dg, out)
    })
}

/// Full `R^l_ijk` as `[l][i][j][k]`.
pub fn riemann(christoffel: &TensorField) -> Result<TensorField> {
    with_partials(christoffel, Valence::Tensor { up: 1, down: 3 }, |gm, dg, out| {
        for l in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        out[((l * DIM + i) * DIM + j) * DIM + k] = riemann_component(gm, &dg, l, i, j, k);
                    }
                }
            }
        }
    })
}

/// `max |R^l_ijk + R^l_jki + R^l_kij|`.
pub fn bianchi_residual(riemann: &TensorField) -> f64 {
    riemann.max_over(|r| {
        let mut worst: f64 = 0.0;
        for l in 0..DIM {
            for i in 0..DIM {
                for j in 0..DIM {
                    for k in 0..DIM {
                        let at = |a: usize, b: usize, c: usize| r[((l * DIM + a) * DIM + b) * DIM + c];
                        worst = worst.max((at(i, j, k) + at(j, k, i) + at(k, i, j)).abs());
                    }
                }
            }
        }
        worst
    })
}

/// Christoffel symbols, `Ric_ik = R^l_ilk` and `R = g^{ij} Ric_ij`, without
/// storing the full Riemann tensor.
pub fn curvature(g: &TensorField) -> Result<CurvatureData> {
    let christoffel = levi_civita(g)?;
    let raw = with_partials(&christoffel, Valence::METRIC, |gm, dg, out| {
        for i in 0..DIM {
            for k in 0..DIM {
                out[i * DIM + k] = (0..DIM).map(|l| riemann_component(gm, &dg, l, i, l, k)).sum();
            }
        }
    })?;
    let mut asym: f64 = 0.0;
    for p in 0..raw.point_count() {
        let v = raw.point_values(p);
        for i in 0..DIM {
            for k in 0..i {
                asym = asym.max((v[i * DIM + k] - v[k * DIM + i]).abs());
            }
        }
    }
    let scale = raw.max_abs();
    let ricci_asymmetry = if scale > 0.0 { asym / scale } else { asym };
    let ricci = raw.map(Valence::METRIC, |v, out| {
        for i in 0..DIM {
            for k in 0..DIM {
                out[i * DIM + k] = 0.5 * (v[i * DIM + k] + v[k * DIM + i]);
            }
        }
    })?;
    let scalar = TensorField::zip_map(&[g, &ricci], Valence::SCALAR, |_, ins, out| {
        let gi = inverse(ins[0]).expect("metric checked");
        out[0] = (0..D2).map(|c| gi[(c / DIM, c % DIM)] * ins[1][c]).sum();
    })?;
    Ok(CurvatureData {
        christoffel,
        ricci,
        scalar,
        ricci_asymmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Chart;

    fn flat(n: usize) -> TensorField {
        let c = Chart::centered(n, 0.2, [0.0; DIM]).unwrap();
        let id: Vec<f64> = (0..D2).map(|c| if c / DIM == c % DIM { 1.0 } else { 0.0 }).collect();
        TensorField::constant(&c, Valence::METRIC, &id).unwrap()
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let cd = curvature(&flat(5)).unwrap();
        assert_eq!(cd.christoffel.max_abs(), 0.0);
        assert_eq!(riemann(&cd.christoffel).unwrap().max_abs(), 0.0);
        assert_eq!(cd.scalar.max_abs(), 0.0);
    }

    #[test]
    fn indefinite_metric_reports_location() {
        let c = Chart::centered(5, 0.2, [0.0; DIM]).unwrap();
        let mut dep = [false; DIM];
        dep[0] = true;
        let g = TensorField::sample(&c, Valence::METRIC, dep, |x| {
            let mut m = vec![0.0; D2];
            for i in 0..DIM {
                m[i * DIM + i] = 1.0;
            }
            m[0] = x[0];
            m
        })
        .unwrap();
        match levi_civita(&g) {
            Err(Error::IndefiniteMetric(at)) => assert_eq!(at[0], 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn covariant_derivative_of_constant_scalar() {
        let g = flat(5);
        let gamma = levi_civita(&g).unwrap();
        let f = TensorField::constant(g.chart(), Valence::SCALAR, &[2.0]).unwrap();
        let d = covariant_derivative(&f, &gamma).unwrap();
        assert_eq!(d.valence(), Valence::FormGradient(0));
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn wrong_valence_rejected() {
        let g = flat(5);
        assert!(covariant_derivative(&g, &g).is_err());
        let f = TensorField::constant(g.chart(), Valence::SCALAR, &[2.0]).unwrap();
        assert!(levi_civita(&f).is_err());
    }
}

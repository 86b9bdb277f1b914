use super::{Chart, TensorField, Valence};
use crate::error::{Error, Result};
use crate::exterior::{tables, AlternatingForm, DIM};

/// Samples a form-valued function. Axes with `depends[a] == false` are
/// stored uniform.
pub fn form_field_from_fn<F>(chart: &Chart, degree: usize, depends: [bool; DIM], f: F) -> Result<TensorField>
where
    F: Fn(&[f64; DIM]) -> AlternatingForm + Sync,
{
    TensorField::sample(chart, Valence::Form(degree), depends, |x| {
        let form = f(x);
        debug_assert_eq!(form.degree(), degree);
        form.into_coeffs()
    })
}

/// `dα = Σ_a dx^a ∧ ∂_a α` with central differences.
pub fn exterior_derivative(f: &TensorField) -> Result<TensorField> {
    let k = match f.valence() {
        Valence::Form(k) => k,
        other => return Err(Error::ValenceMismatch(format!("exterior derivative of {other:?}"))),
    };
    if k >= DIM {
        return Err(Error::InvalidDegree(k + 1));
    }
    let axes: Vec<usize> = (0..DIM).filter(|&a| f.is_active(a)).collect();
    if axes.is_empty() {
        return f.map(Valence::Form(k + 1), |_, out| out.fill(0.0));
    }
    let partials = axes.iter().map(|&a| f.partial(a)).collect::<Result<Vec<_>>>()?;
    let mut slot = [usize::MAX; DIM];
    for (i, &a) in axes.iter().enumerate() {
        slot[a] = i;
    }
    let refs: Vec<&TensorField> = partials.iter().collect();
    let entries = tables().wedge(1, k);
    TensorField::zip_map(&refs, Valence::Form(k + 1), |_, ins, out| {
        out.fill(0.0);
        for e in entries {
            let s = slot[e.left as usize];
            if s == usize::MAX {
                continue;
            }
            let v = ins[s][e.right as usize];
            out[e.out as usize] += if e.negative { -v } else { v };
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = Chart::centered(5, 0.5, [0.0; DIM]).unwrap();
        let phi = crate::g2::standard_phi::<f64>();
        let f = TensorField::constant(&c, Valence::Form(3), phi.coeffs()).unwrap();
        let d = exterior_derivative(&f).unwrap();
        assert_eq!(d.valence(), Valence::Form(4));
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn linear_data_is_exact() {
        // d(x1 dx2) = dx1 ∧ dx2
        let c = Chart::centered(5, 0.3, [0.2; DIM]).unwrap();
        let mut dep = [false; DIM];
        dep[0] = true;
        let f = form_field_from_fn(&c, 1, dep, |x| {
            let mut a = AlternatingForm::zero(1);
            a.set(&[1], x[0]).unwrap();
            a
        })
        .unwrap();
        let d = exterior_derivative(&f).unwrap();
        let expected = AlternatingForm::<f64>::basis(&[0, 1]).unwrap();
        for p in 0..d.point_count() {
            for (a, b) in d.point_values(p).iter().zip(expected.coeffs()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn top_degree_rejected() {
        let c = Chart::centered(5, 0.5, [0.0; DIM]).unwrap();
        let f = TensorField::constant(&c, Valence::Form(7), &[1.0]).unwrap();
        assert!(exterior_derivative(&f).is_err());
    }
}

//! Multilinear algebra on an oriented 7-dimensional inner-product space.
//!
//! Forms use the convention `α = (1/k!) α_{i1..ik} dx^{i1} ∧ .. ∧ dx^{ik}`,
//! so the packed coefficient of an increasing multi-index `I` is exactly
//! `α_I`. The orientation `dx^1 ∧ .. ∧ dx^7` is positive.

mod index;
mod metric;
mod scalar;

use std::ops::{Add, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;

pub use index::{form_len, DIM};
pub use metric::{Mat7, Matrix7, MetricData};
pub use scalar::Scalar;

pub(crate) use index::{mask_indices, sort_indices, tables};
pub(crate) use metric::{compound_matrix, to_array};

use crate::error::{Error, Result};

/// A degree-k alternating form, stored packed over increasing multi-indices.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingForm<S: Scalar = f64> {
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> AlternatingForm<S> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "form degree {degree} exceeds 7");
        AlternatingForm {
            degree,
            coeffs: vec![S::zero(); form_len(degree)],
        }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<S>) -> Result<Self> {
        if degree > DIM {
            return Err(Error::InvalidDegree(degree));
        }
        if coeffs.len() != form_len(degree) {
            return Err(Error::CoefficientCount {
                expected: form_len(degree),
                found: coeffs.len(),
            });
        }
        Ok(AlternatingForm { degree, coeffs })
    }

    pub fn scalar(value: S) -> Self {
        AlternatingForm {
            degree: 0,
            coeffs: vec![value],
        }
    }

    /// `dx^{i1} ∧ .. ∧ dx^{ik}` for 0-based indices in any order.
    pub fn basis(indices: &[usize]) -> Result<Self> {
        let mut form = Self::zero(indices.len().min(DIM));
        if indices.len() > DIM {
            return Err(Error::InvalidDegree(indices.len()));
        }
        form.set(indices, S::one())?;
        Ok(form)
    }

    /// The volume coefficient times `dx^1 ∧ .. ∧ dx^7`.
    pub fn top(value: S) -> Self {
        AlternatingForm {
            degree: DIM,
            coeffs: vec![value],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [S] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Component `α_{i1..ik}` for arbitrary (possibly unsorted) indices.
    pub fn coeff(&self, indices: &[usize]) -> Result<S> {
        self.check_indices(indices)?;
        Ok(match sort_indices(indices) {
            None => S::zero(),
            Some((mask, negative)) => {
                let v = self.coeffs[tables().position(mask)].clone();
                if negative {
                    -v
                } else {
                    v
                }
            }
        })
    }

    /// Sets `α_{i1..ik}` (and implicitly every permutation of it).
    pub fn set(&mut self, indices: &[usize], value: S) -> Result<()> {
        self.check_indices(indices)?;
        match sort_indices(indices) {
            None if value.is_zero() => Ok(()),
            None => Err(Error::ValenceMismatch(
                "a repeated index must carry a zero coefficient".into(),
            )),
            Some((mask, negative)) => {
                let slot = tables().position(mask);
                self.coeffs[slot] = if negative { -value } else { value };
                Ok(())
            }
        }
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: indices.len(),
            });
        }
        match indices.iter().find(|&&i| i >= DIM) {
            Some(&i) => Err(Error::IndexOutOfRange(i)),
            None => Ok(()),
        }
    }

    /// The coefficient of `dx^1 ∧ .. ∧ dx^7` of a top-degree form.
    pub fn top_coeff(&self) -> Option<&S> {
        (self.degree == DIM).then(|| &self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, s: &S) -> Self {
        AlternatingForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(AlternatingForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(AlternatingForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    fn same_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        wedge(self, other)
    }

    /// Pull back by the linear map whose matrix entry `(a, i)` is `A^a_i`,
    /// i.e. `A^* dx^a = A^a_i dx^i`.
    pub fn pullback(&self, a: &Mat7<S>) -> Self {
        let k = self.degree;
        let comp = compound_matrix(a, k);
        let n = form_len(k);
        let coeffs = (0..n)
            .map(|out| {
                (0..n).fold(S::zero(), |acc, j| {
                    acc + comp[j * n + out].clone() * self.coeffs[j].clone()
                })
            })
            .collect();
        AlternatingForm { degree: k, coeffs }
    }

    /// All `7^k` components `α_{i1..ik}` in row-major order.
    pub fn dense(&self) -> Vec<S> {
        let k = self.degree;
        let total = DIM.pow(k as u32);
        let mut idx = vec![0usize; k];
        (0..total)
            .map(|flat| {
                let mut r = flat;
                for slot in (0..k).rev() {
                    idx[slot] = r % DIM;
                    r /= DIM;
                }
                self.coeff(&idx).expect("indices in range")
            })
            .collect()
    }
}

impl<S: Scalar> AlternatingForm<S> {
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl AlternatingForm<f64> {
    /// A form with independent standard Gaussian packed coefficients.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        AlternatingForm {
            degree,
            coeffs: (0..form_len(degree)).map(|_| rng.sample(StandardNormal)).collect(),
        }
    }
}

impl<S: Scalar> Add for &AlternatingForm<S> {
    type Output = AlternatingForm<S>;

    /// # Panics
    /// On a degree mismatch; use [`AlternatingForm::try_add`] otherwise.
    fn add(self, rhs: Self) -> AlternatingForm<S> {
        self.try_add(rhs).expect("degree mismatch in form addition")
    }
}

impl<S: Scalar> Sub for &AlternatingForm<S> {
    type Output = AlternatingForm<S>;

    fn sub(self, rhs: Self) -> AlternatingForm<S> {
        self.try_sub(rhs).expect("degree mismatch in form subtraction")
    }
}

impl<S: Scalar> Neg for &AlternatingForm<S> {
    type Output = AlternatingForm<S>;

    fn neg(self) -> AlternatingForm<S> {
        AlternatingForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<S: Scalar> std::ops::Mul<S> for &AlternatingForm<S> {
    type Output = AlternatingForm<S>;

    fn mul(self, rhs: S) -> AlternatingForm<S> {
        self.scaled(&rhs)
    }
}

/// Exterior product.
pub fn wedge<S: Scalar>(a: &AlternatingForm<S>, b: &AlternatingForm<S>) -> Result<AlternatingForm<S>> {
    let (p, q) = (a.degree, b.degree);
    if p + q > DIM {
        return Err(Error::DegreeOverflow { left: p, right: q });
    }
    let mut out = AlternatingForm::zero(p + q);
    for e in tables().wedge(p, q) {
        let (x, y) = (&a.coeffs[e.left as usize], &b.coeffs[e.right as usize]);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let term = x.clone() * y.clone();
        let slot: &mut S = &mut out.coeffs[e.out as usize];
        *slot = if e.negative {
            slot.clone() - term
        } else {
            slot.clone() + term
        };
    }
    Ok(out)
}

/// `(ι_v α)_{i2..ik} = v^{i1} α_{i1 i2..ik}`.
pub fn interior_product<S: Scalar>(v: &[S; DIM], a: &AlternatingForm<S>) -> Result<AlternatingForm<S>> {
    if a.degree == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let mut out = AlternatingForm::zero(a.degree - 1);
    for e in tables().interior(a.degree) {
        let (x, vi) = (&a.coeffs[e.input as usize], &v[e.axis as usize]);
        if x.is_zero() || vi.is_zero() {
            continue;
        }
        let term = vi.clone() * x.clone();
        let slot: &mut S = &mut out.coeffs[e.out as usize];
        *slot = if e.negative {
            slot.clone() - term
        } else {
            slot.clone() + term
        };
    }
    Ok(out)
}

/// Interior product with the coordinate vector `e_axis`.
pub fn interior_basis<S: Scalar>(axis: usize, a: &AlternatingForm<S>) -> Result<AlternatingForm<S>> {
    let v: [S; DIM] = std::array::from_fn(|i| if i == axis { S::one() } else { S::zero() });
    interior_product(&v, a)
}

/// Raises all indices of a packed form: `β^{I} = Σ_J C^k(g^{-1})_{IJ} β_J`.
pub(crate) fn raise_form<S: Scalar>(b: &AlternatingForm<S>, m: &MetricData<S>) -> Vec<S> {
    if m.is_identity() {
        return b.coeffs.clone();
    }
    let n = form_len(b.degree);
    let comp = m.compound(b.degree);
    (0..n)
        .map(|i| (0..n).fold(S::zero(), |acc, j| acc + comp[i * n + j].clone() * b.coeffs[j].clone()))
        .collect()
}

/// Hodge star, characterised by `α ∧ ∗β = ⟨α, β⟩ Vol`.
pub fn hodge_star<S: Scalar>(b: &AlternatingForm<S>, m: &MetricData<S>) -> AlternatingForm<S> {
    let k = b.degree;
    let t = tables();
    let raised = raise_form(b, m);
    let mut out = AlternatingForm::zero(DIM - k);
    for (i, &mask) in t.masks(k).iter().enumerate() {
        let comp = index::FULL_MASK ^ mask;
        let v = raised[i].clone() * m.vol_coeff().clone();
        out.coeffs[t.position(comp)] = if t.complement_negative(mask) { -v } else { v };
    }
    out
}

/// `⟨α, β⟩ = (1/k!) α_{i1..ik} β^{i1..ik}`.
pub fn form_inner<S: Scalar>(a: &AlternatingForm<S>, b: &AlternatingForm<S>, m: &MetricData<S>) -> Result<S> {
    a.same_degree(b)?;
    let raised = raise_form(b, m);
    Ok(a.coeffs
        .iter()
        .zip(raised)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y))
}

/// `α ∧ α` or `α ∧ α ∧ α`.
pub fn form_power<S: Scalar>(a: &AlternatingForm<S>, p: usize) -> Result<AlternatingForm<S>> {
    if !(2..=3).contains(&p) {
        return Err(Error::ValenceMismatch(format!("form power {p} not in {{2, 3}}")));
    }
    if p * a.degree > DIM {
        return Err(Error::DegreeOverflow {
            left: a.degree * (p - 1),
            right: a.degree,
        });
    }
    let square = wedge(a, a)?;
    if p == 2 {
        Ok(square)
    } else {
        wedge(&square, a)
    }
}

/// The volume form `vol_coeff · dx^1 ∧ .. ∧ dx^7` of a metric.
pub fn volume_form<S: Scalar>(m: &MetricData<S>) -> AlternatingForm<S> {
    AlternatingForm::top(m.vol_coeff().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dx(i: usize) -> AlternatingForm {
        AlternatingForm::basis(&[i]).unwrap()
    }

    #[test]
    fn basis_wedge() {
        let w = dx(0).wedge(&dx(1)).unwrap();
        assert_eq!(w.coeff(&[0, 1]).unwrap(), 1.0);
        assert_eq!(w.coeff(&[1, 0]).unwrap(), -1.0);
    }

    #[test]
    fn wedge_degree_overflow() {
        let a = AlternatingForm::<f64>::zero(4);
        assert!(matches!(wedge(&a, &a), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn one_form_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = AlternatingForm::random(1, &mut rng);
        assert!(wedge(&a, &a).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn interior_of_basis() {
        let w = dx(0).wedge(&dx(1)).unwrap();
        let r = interior_basis(0, &w).unwrap();
        assert_eq!(r, dx(1));
        let r = interior_basis(1, &w).unwrap();
        assert_eq!(r, &dx(0) * -1.0);
    }

    #[test]
    fn interior_of_scalar_rejected() {
        let a = AlternatingForm::scalar(2.0);
        assert!(interior_basis(0, &a).is_err());
    }

    #[test]
    fn euclidean_star_basics() {
        let m = MetricData::<f64>::euclidean();
        assert_eq!(hodge_star(&AlternatingForm::scalar(1.0), &m), AlternatingForm::top(1.0));
        assert_eq!(hodge_star(&AlternatingForm::top(1.0), &m), AlternatingForm::scalar(1.0));
        let e123 = AlternatingForm::basis(&[0, 1, 2]).unwrap();
        let e4567 = AlternatingForm::basis(&[3, 4, 5, 6]).unwrap();
        assert_eq!(hodge_star(&e123, &m), e4567);
    }

    #[test]
    fn inner_of_basis_two_form() {
        let m = MetricData::<f64>::euclidean();
        let w = dx(0).wedge(&dx(1)).unwrap();
        assert_eq!(form_inner(&w, &w, &m).unwrap(), 1.0);
        assert!(form_inner(&w, &dx(0), &m).is_err());
    }

    #[test]
    fn powers() {
        let e12 = dx(0).wedge(&dx(1)).unwrap();
        let e34 = dx(2).wedge(&dx(3)).unwrap();
        assert!(form_power(&e12, 2).unwrap().is_zero());
        let sum = &e12 + &e34;
        let sq = form_power(&sum, 2).unwrap();
        let expected = AlternatingForm::basis(&[0, 1, 2, 3]).unwrap().scaled(&2.0);
        assert_eq!(sq, expected);
        assert!(form_power(&AlternatingForm::<f64>::zero(3), 3).is_err());
        assert!(form_power(&e12, 4).is_err());
    }

    #[test]
    fn dense_is_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = AlternatingForm::random(3, &mut rng);
        let d = a.dense();
        let at = |i: usize, j: usize, k: usize| d[(i * DIM + j) * DIM + k];
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    assert_eq!(at(i, j, k), -at(j, i, k));
                    assert_eq!(at(i, j, k), -at(i, k, j));
                }
            }
        }
    }
}

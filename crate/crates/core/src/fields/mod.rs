//! Tensor fields sampled on a box chart in 7 coordinates, with second-order
//! central differences.
//!
//! A field stores, per axis, either a span of grid indices or `Uniform`, which
//! marks data constant along that axis (stored once, derivative exactly zero).
//! Under `InteriorOnly` every derivative shrinks the span by one index on each
//! side; under `Periodic` spans wrap and never shrink.

mod calculus;
mod connection;
mod snapshot;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{form_len, DIM};

pub use calculus::{exterior_derivative, form_field_from_fn};
pub use connection::{bianchi_residual, covariant_derivative, curvature, levi_civita, riemann, CurvatureData};
pub use snapshot::{read_snapshot, write_snapshot, SNAPSHOT_MAGIC};

/// Smallest admissible resolution along any axis.
pub const MIN_RESOLUTION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Boundary {
    Periodic,
    InteriorOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    resolution: [usize; DIM],
    spacing: [f64; DIM],
    origin: [f64; DIM],
    boundary: Boundary,
}

impl Chart {
    pub fn new(resolution: [usize; DIM], spacing: [f64; DIM], origin: [f64; DIM], boundary: Boundary) -> Result<Self> {
        for (axis, &n) in resolution.iter().enumerate() {
            if n < MIN_RESOLUTION {
                return Err(Error::ResolutionTooSmall { axis, len: n });
            }
        }
        if spacing.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidChart("spacing must be positive and finite".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidChart("origin must be finite".into()));
        }
        Ok(Chart {
            resolution,
            spacing,
            origin,
            boundary,
        })
    }

    /// Periodic box `[0, L_a)` with `n_a` points per axis.
    pub fn periodic(resolution: [usize; DIM], lengths: [f64; DIM]) -> Result<Self> {
        let spacing = std::array::from_fn(|a| lengths[a] / resolution[a] as f64);
        Self::new(resolution, spacing, [0.0; DIM], Boundary::Periodic)
    }

    /// An `n^7` interior-only block of spacing `h` whose middle point is `center`.
    pub fn centered(n: usize, h: f64, center: [f64; DIM]) -> Result<Self> {
        let half = (n as f64 - 1.0) / 2.0;
        let origin = std::array::from_fn(|a| center[a] - half * h);
        Self::new([n; DIM], [h; DIM], origin, Boundary::InteriorOnly)
    }

    pub fn resolution(&self) -> &[usize; DIM] {
        &self.resolution
    }

    pub fn spacing(&self) -> &[f64; DIM] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64; DIM] {
        &self.origin
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn coordinate(&self, axis: usize, index: usize) -> f64 {
        self.origin[axis] + index as f64 * self.spacing[axis]
    }

    pub fn point(&self, index: &[usize; DIM]) -> [f64; DIM] {
        std::array::from_fn(|a| self.coordinate(a, index[a]))
    }

    /// Same chart with the origin moved by `shift`.
    pub fn translated(&self, shift: [f64; DIM]) -> Self {
        let mut c = self.clone();
        for a in 0..DIM {
            c.origin[a] += shift[a];
        }
        c
    }
}

/// What a field's per-point coefficient array represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Valence {
    /// Packed k-form.
    Form(usize),
    /// Dense tensor with `up` contravariant then `down` covariant indices.
    Tensor { up: usize, down: usize },
    /// `∇_i α_I`: a derivative index followed by a packed k-form.
    FormGradient(usize),
}

impl Valence {
    pub const SCALAR: Valence = Valence::Form(0);
    pub const METRIC: Valence = Valence::Tensor { up: 0, down: 2 };

    pub fn components(&self) -> usize {
        match *self {
            Valence::Form(k) => form_len(k),
            Valence::Tensor { up, down } => DIM.pow((up + down) as u32),
            Valence::FormGradient(k) => DIM * form_len(k),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Valence::Form(k) | Valence::FormGradient(k) => k <= DIM,
            Valence::Tensor { up, down } => up + down <= 4,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ValenceMismatch(format!("unsupported valence {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisExtent {
    Uniform,
    Span { start: usize, len: usize },
}

impl AxisExtent {
    fn len(&self) -> usize {
        match *self {
            AxisExtent::Uniform => 1,
            AxisExtent::Span { len, .. } => len,
        }
    }

    fn start(&self) -> usize {
        match *self {
            AxisExtent::Uniform => 0,
            AxisExtent::Span { start, .. } => start,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorField {
    chart: Chart,
    valence: Valence,
    extents: [AxisExtent; DIM],
    values: Vec<f64>,
}

fn dims(extents: &[AxisExtent; DIM]) -> [usize; DIM] {
    std::array::from_fn(|a| extents[a].len())
}

fn strides(extents: &[AxisExtent; DIM]) -> [usize; DIM] {
    let d = dims(extents);
    let mut s = [1usize; DIM];
    for a in (0..DIM - 1).rev() {
        s[a] = s[a + 1] * d[a + 1];
    }
    s
}

fn grid_index(extents: &[AxisExtent; DIM], mut p: usize) -> [usize; DIM] {
    let d = dims(extents);
    let mut g = [0usize; DIM];
    for a in (0..DIM).rev() {
        g[a] = extents[a].start() + p % d[a];
        p /= d[a];
    }
    g
}

impl TensorField {
    /// Builds a field point by point in parallel; `f` receives the grid index
    /// (0 along uniform axes) and writes the coefficients.
    pub(crate) fn build<F>(chart: &Chart, valence: Valence, extents: [AxisExtent; DIM], f: F) -> Self
    where
        F: Fn([usize; DIM], &mut [f64]) + Sync,
    {
        let comps = valence.components();
        let n: usize = dims(&extents).iter().product();
        let mut values = vec![0.0; n * comps];
        values
            .par_chunks_mut(comps.max(1))
            .enumerate()
            .for_each(|(p, out)| f(grid_index(&extents, p), out));
        TensorField {
            chart: chart.clone(),
            valence,
            extents,
            values,
        }
    }

    /// Samples `f` at every grid point. Axes with `depends[a] == false` are
    /// stored uniform and sampled at index 0.
    pub fn sample<F>(chart: &Chart, valence: Valence, depends: [bool; DIM], f: F) -> Result<Self>
    where
        F: Fn(&[f64; DIM]) -> Vec<f64> + Sync,
    {
        valence.validate()?;
        let extents = std::array::from_fn(|a| {
            if depends[a] {
                AxisExtent::Span {
                    start: 0,
                    len: chart.resolution[a],
                }
            } else {
                AxisExtent::Uniform
            }
        });
        let comps = valence.components();
        let bad = std::sync::atomic::AtomicUsize::new(usize::MAX);
        let field = Self::build(chart, valence, extents, |g, out| {
            let v = f(&chart.point(&g));
            if v.len() == comps {
                out.copy_from_slice(&v);
            } else {
                bad.store(v.len(), std::sync::atomic::Ordering::Relaxed);
            }
        });
        match bad.into_inner() {
            usize::MAX => Ok(field),
            found => Err(Error::CoefficientCount { expected: comps, found }),
        }
    }

    /// The same coefficients at every point.
    pub fn constant(chart: &Chart, valence: Valence, value: &[f64]) -> Result<Self> {
        valence.validate()?;
        if value.len() != valence.components() {
            return Err(Error::CoefficientCount {
                expected: valence.components(),
                found: value.len(),
            });
        }
        Ok(TensorField {
            chart: chart.clone(),
            valence,
            extents: [AxisExtent::Uniform; DIM],
            values: value.to_vec(),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn valence(&self) -> Valence {
        self.valence
    }

    pub fn extents(&self) -> &[AxisExtent; DIM] {
        &self.extents
    }

    pub fn components(&self) -> usize {
        self.valence.components()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of stored points (uniform axes count once).
    pub fn point_count(&self) -> usize {
        dims(&self.extents).iter().product()
    }

    /// Number of chart points the field covers.
    pub fn covered_points(&self) -> usize {
        (0..DIM)
            .map(|a| match self.extents[a] {
                AxisExtent::Uniform => self.chart.resolution[a],
                AxisExtent::Span { len, .. } => len,
            })
            .product()
    }

    /// Points dropped from each side of each axis relative to the chart.
    pub fn shrinkage(&self) -> [usize; DIM] {
        std::array::from_fn(|a| match self.extents[a] {
            AxisExtent::Uniform => 0,
            AxisExtent::Span { start, .. } => start,
        })
    }

    pub fn is_active(&self, axis: usize) -> bool {
        matches!(self.extents[axis], AxisExtent::Span { .. })
    }

    pub fn point_values(&self, p: usize) -> &[f64] {
        let c = self.components();
        &self.values[p * c..(p + 1) * c]
    }

    pub fn grid_index_of(&self, p: usize) -> [usize; DIM] {
        grid_index(&self.extents, p)
    }

    /// Coefficients at a chart grid index, if covered.
    pub fn at(&self, index: &[usize; DIM]) -> Option<&[f64]> {
        self.offset_of(index).map(|p| self.point_values(p))
    }

    /// Stored point number of a chart grid index, if covered.
    pub fn offset_of(&self, index: &[usize; DIM]) -> Option<usize> {
        let s = strides(&self.extents);
        let mut off = 0;
        for a in 0..DIM {
            if let AxisExtent::Span { start, len } = self.extents[a] {
                if index[a] < start || index[a] >= start + len {
                    return None;
                }
                off += (index[a] - start) * s[a];
            }
        }
        Some(off)
    }

    /// `∂_axis` of every component by central differences.
    pub fn partial(&self, axis: usize) -> Result<TensorField> {
        if axis >= DIM {
            return Err(Error::IndexOutOfRange(axis));
        }
        let (start, len) = match self.extents[axis] {
            AxisExtent::Uniform => {
                return Ok(TensorField {
                    chart: self.chart.clone(),
                    valence: self.valence,
                    extents: self.extents,
                    values: vec![0.0; self.values.len()],
                })
            }
            AxisExtent::Span { start, len } => (start, len),
        };
        let periodic = self.chart.boundary == Boundary::Periodic;
        let mut extents = self.extents;
        if !periodic {
            if len < 3 {
                return Err(Error::ResolutionTooSmall { axis, len });
            }
            extents[axis] = AxisExtent::Span {
                start: start + 1,
                len: len - 2,
            };
        }
        let n = self.chart.resolution[axis];
        let inv = 0.5 / self.chart.spacing[axis];
        let comps = self.components();
        let stride = strides(&self.extents);
        let src = &self.extents;
        Ok(Self::build(&self.chart, self.valence, extents, |g, out| {
            let base: usize = (0..DIM)
                .filter(|&a| a != axis)
                .map(|a| (g[a] - src[a].start()) * stride[a])
                .sum();
            let (fwd, back) = if periodic {
                ((g[axis] + 1) % n, (g[axis] + n - 1) % n)
            } else {
                (g[axis] + 1, g[axis] - 1)
            };
            let pf = base + (fwd - start) * stride[axis];
            let pb = base + (back - start) * stride[axis];
            let vf = &self.values[pf * comps..(pf + 1) * comps];
            let vb = &self.values[pb * comps..(pb + 1) * comps];
            for c in 0..comps {
                out[c] = (vf[c] - vb[c]) * inv;
            }
        }))
    }

    /// Applies `f` pointwise on the common extent of `inputs`.
    pub fn zip_map<F>(inputs: &[&TensorField], valence: Valence, f: F) -> Result<TensorField>
    where
        F: Fn([usize; DIM], &[&[f64]], &mut [f64]) + Sync,
    {
        valence.validate()?;
        let first = inputs
            .first()
            .ok_or_else(|| Error::ValenceMismatch("zip_map needs at least one input".into()))?;
        let chart = &first.chart;
        if inputs.iter().any(|t| t.chart != *chart) {
            return Err(Error::ChartMismatch);
        }
        let mut extents = [AxisExtent::Uniform; DIM];
        for a in 0..DIM {
            for t in inputs {
                if let AxisExtent::Span { start, len } = t.extents[a] {
                    extents[a] = match extents[a] {
                        AxisExtent::Uniform => AxisExtent::Span { start, len },
                        AxisExtent::Span { start: s0, len: l0 } => {
                            let lo = s0.max(start);
                            let hi = (s0 + l0).min(start + len);
                            if hi <= lo {
                                return Err(Error::ChartMismatch);
                            }
                            AxisExtent::Span {
                                start: lo,
                                len: hi - lo,
                            }
                        }
                    };
                }
            }
        }
        let meta: Vec<([usize; DIM], [AxisExtent; DIM], usize)> = inputs
            .iter()
            .map(|t| (strides(&t.extents), t.extents, t.components()))
            .collect();
        Ok(Self::build(chart, valence, extents, |g, out| {
            let slices: Vec<&[f64]> = inputs
                .iter()
                .zip(&meta)
                .map(|(t, (s, e, c))| {
                    let off: usize = (0..DIM)
                        .map(|a| match e[a] {
                            AxisExtent::Uniform => 0,
                            AxisExtent::Span { start, .. } => (g[a] - start) * s[a],
                        })
                        .sum();
                    &t.values[off * c..(off + 1) * c]
                })
                .collect();
            f(g, &slices, out)
        }))
    }

    pub fn map<F>(&self, valence: Valence, f: F) -> Result<TensorField>
    where
        F: Fn(&[f64], &mut [f64]) + Sync,
    {
        Self::zip_map(&[self], valence, |_, v, out| f(v[0], out))
    }

    /// Componentwise `self - other` on the common extent.
    pub fn difference(&self, other: &TensorField) -> Result<TensorField> {
        if self.valence != other.valence {
            return Err(Error::ValenceMismatch(format!(
                "{:?} vs {:?}",
                self.valence, other.valence
            )));
        }
        Self::zip_map(&[self, other], self.valence, |_, v, out| {
            for c in 0..out.len() {
                out[c] = v[0][c] - v[1][c];
            }
        })
    }

    /// Same chart, valence and extents with new coefficients.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> TensorField {
        assert_eq!(values.len(), self.values.len());
        TensorField {
            chart: self.chart.clone(),
            valence: self.valence,
            extents: self.extents,
            values,
        }
    }

    /// The same data on the chart with its origin moved by `shift`.
    pub fn translated(&self, shift: [f64; DIM]) -> TensorField {
        TensorField {
            chart: self.chart.translated(shift),
            ..self.clone()
        }
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum of a per-point statistic, in index order.
    pub fn max_over<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        (0..self.point_count()).fold(f64::NEG_INFINITY, |m, p| m.max(f(self.point_values(p))))
    }

    /// `∫ f` over the covered box, as a Riemann sum in index order. Uniform
    /// axes contribute their full chart length.
    pub fn integral<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        let mut weight = 1.0;
        for a in 0..DIM {
            weight *= self.chart.spacing[a];
            if let AxisExtent::Uniform = self.extents[a] {
                weight *= self.chart.resolution[a] as f64;
            }
        }
        let sum = (0..self.point_count()).fold(0.0, |acc, p| acc + f(self.point_values(p)));
        sum * weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn periodic_chart(n: usize) -> Chart {
        let l = 2.0 * std::f64::consts::PI;
        Chart::periodic([n, n, 5, 5, 5, 5, 5], [l; DIM]).unwrap()
    }

    #[test]
    fn chart_rejects_small_resolution() {
        assert!(matches!(
            Chart::new([4, 5, 5, 5, 5, 5, 5], [1.0; DIM], [0.0; DIM], Boundary::Periodic),
            Err(Error::ResolutionTooSmall { axis: 0, len: 4 })
        ));
    }

    #[test]
    fn uniform_partial_is_zero() {
        let c = periodic_chart(8);
        let f = TensorField::constant(&c, Valence::SCALAR, &[3.0]).unwrap();
        assert_eq!(f.partial(2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn interior_partial_shrinks() {
        let c = Chart::centered(7, 0.1, [0.0; DIM]).unwrap();
        let mut dep = [false; DIM];
        dep[0] = true;
        let f = TensorField::sample(&c, Valence::SCALAR, dep, |x| vec![x[0] * x[0]]).unwrap();
        let d = f.partial(0).unwrap();
        assert_eq!(d.extents()[0], AxisExtent::Span { start: 1, len: 5 });
        for p in 0..d.point_count() {
            let g = d.grid_index_of(p);
            let x = c.coordinate(0, g[0]);
            assert!((d.point_values(p)[0] - 2.0 * x).abs() < 1e-12);
        }
        let dd = d.partial(0).unwrap().partial(0).unwrap();
        assert_eq!(dd.extents()[0], AxisExtent::Span { start: 3, len: 1 });
        assert!(dd.partial(0).is_err());
    }

    #[test]
    fn periodic_partial_wraps() {
        let c = periodic_chart(16);
        let mut dep = [false; DIM];
        dep[1] = true;
        let f = TensorField::sample(&c, Valence::SCALAR, dep, |x| vec![x[1].sin()]).unwrap();
        let d = f.partial(1).unwrap();
        assert_eq!(d.point_count(), 16);
        let h = c.spacing()[1];
        let factor = h.sin() / h;
        for p in 0..16 {
            let x = c.coordinate(1, d.grid_index_of(p)[1]);
            assert!((d.point_values(p)[0] - factor * x.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn zip_rejects_other_chart() {
        let a = TensorField::constant(&periodic_chart(8), Valence::SCALAR, &[1.0]).unwrap();
        let b = TensorField::constant(&periodic_chart(10), Valence::SCALAR, &[1.0]).unwrap();
        assert!(matches!(a.difference(&b), Err(Error::ChartMismatch)));
    }

    #[test]
    fn sample_checks_length() {
        let c = periodic_chart(8);
        assert!(TensorField::sample(&c, Valence::Form(1), [true; DIM], |_| vec![0.0; 3]).is_err());
    }

    #[test]
    fn integral_of_constant_is_volume() {
        let c = periodic_chart(8);
        let f = TensorField::constant(&c, Valence::SCALAR, &[1.0]).unwrap();
        let vol = (2.0 * std::f64::consts::PI).powi(7);
        assert!((f.integral(|v| v[0]) - vol).abs() < 1e-9 * vol);
    }
}

//! Volume growth under a two-sided Ricci pinching `−k2 g ≤ Ric ≤ −k1 g`
//! versus the `sinh⁶` comparison volume.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `Vol(S⁶) = 16π³/15`.
pub const SPHERE6_VOLUME: f64 = 16.0 * PI * PI * PI / 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinchingParams {
    k1: f64,
    k2: f64,
}

impl PinchingParams {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1 > 0.0 && k2 >= k1 && k2.is_finite()) {
            return Err(Error::InvalidPinching { k1, k2 });
        }
        Ok(PinchingParams { k1, k2 })
    }

    /// `(ratio · k2, k2)`.
    pub fn from_ratio(ratio: f64, k2: f64) -> Result<Self> {
        Self::new(ratio * k2, k2)
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn k2(&self) -> f64 {
        self.k2
    }

    pub fn ratio(&self) -> f64 {
        self.k1 / self.k2
    }

    /// Comparison curvature `K2 = k2/6`.
    pub fn comparison_curvature(&self) -> f64 {
        self.k2 / 6.0
    }
}

/// `6√3 k1² / (√7 k2^{3/2})`.
pub fn growth_exponent(p: &PinchingParams) -> f64 {
    6.0 * 3f64.sqrt() * p.k1 * p.k1 / (7f64.sqrt() * p.k2.powf(1.5))
}

/// Taylor coefficients of `N(x)/x⁷` in powers of `x²`, with
/// `N(x) = sinh 6x − 9 sinh 4x + 45 sinh 2x − 60x`.
fn n_series(x: f64) -> f64 {
    // N(x) = Σ_{m≥3} c_m x^{2m+1}/(2m+1)!, c_m = 6^{2m+1} − 9·4^{2m+1} + 45·2^{2m+1} > 0
    let x2 = x * x;
    let (mut p6, mut p4, mut p2) = (6f64.powi(7), 4f64.powi(7), 2f64.powi(7));
    let mut fact = 5040.0;
    let mut xp = 1.0;
    let mut sum = 0.0;
    for m in 3..200 {
        let term = (p6 - 9.0 * p4 + 45.0 * p2) / fact * xp;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
        let (a, b) = ((2 * m + 2) as f64, (2 * m + 3) as f64);
        fact *= a * b;
        p6 *= 36.0;
        p4 *= 16.0;
        p2 *= 4.0;
        xp *= x2;
    }
    sum
}

const SERIES_LIMIT: f64 = 2.0;

/// `ln N(x)` for `x > 0`, overflow-free.
pub fn log_volume_numerator(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        return n_series(x).ln() + 7.0 * x.ln();
    }
    // N = e^{6x}/2 · (1 − 9e^{−2x} + 45e^{−4x} − 120x e^{−6x} − 45e^{−8x} + 9e^{−10x} − e^{−12x})
    let e = |k: f64| (-k * x).exp();
    let bracket = 1.0 - 9.0 * e(2.0) + 45.0 * e(4.0) - 120.0 * x * e(6.0) - 45.0 * e(8.0) + 9.0 * e(10.0) - e(12.0);
    6.0 * x - LN_2 + bracket.ln()
}

/// `N(x) = sinh 6x − 9 sinh 4x + 45 sinh 2x − 60x`.
pub fn volume_numerator(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        log_volume_numerator(x).exp()
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r < 0.0 || r.is_nan() {
        Err(Error::NegativeRadius(r))
    } else {
        Ok(())
    }
}

fn check_curvature(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("comparison curvature must be positive, got {k}")))
    }
}

/// `ln Vol_{−K2}(B(r))`.
pub fn log_comparison_volume(r: f64, k2_comparison: f64) -> Result<f64> {
    check_radius(r)?;
    check_curvature(k2_comparison)?;
    if r == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let s = k2_comparison.sqrt();
    Ok(SPHERE6_VOLUME.ln() - 192f64.ln() - 3.5 * k2_comparison.ln() + log_volume_numerator(s * r))
}

/// `Vol(S⁶) ∫₀^r (sinh(√K2 s)/√K2)⁶ ds = Vol(S⁶) N(√K2 r) / (192 K2^{7/2})`.
pub fn comparison_volume(r: f64, k2_comparison: f64) -> Result<f64> {
    Ok(log_comparison_volume(r, k2_comparison)?.exp())
}

/// The same volume by double-exponential quadrature of the integrand, over
/// unit subintervals of `√K2 s` taken from the top down.
pub fn comparison_volume_quadrature(r: f64, k2_comparison: f64) -> Result<f64> {
    check_radius(r)?;
    check_curvature(k2_comparison)?;
    let x = k2_comparison.sqrt() * r;
    let mut total = 0.0;
    let mut hi = x;
    while hi > 0.0 {
        let lo = (hi - 1.0).max(0.0);
        // |∫| ≤ (hi − lo) sinh⁶(hi)
        let bound = (hi - lo) * hi.sinh().powi(6);
        let piece =
            quadrature::double_exponential::integrate(|u: f64| u.sinh().powi(6), lo, hi, bound * 1e-14).integral;
        total += piece;
        if piece < total * 1e-18 {
            break;
        }
        hi = lo;
    }
    Ok(SPHERE6_VOLUME * total / k2_comparison.powf(3.5))
}

/// Euclidean ball volume `Vol(S⁶) r⁷/7`.
pub fn euclidean_ball_volume(r: f64) -> f64 {
    SPHERE6_VOLUME * r.powi(7) / 7.0
}

/// `ln F(r)` with `F(r) = N(√K2 r) / exp(rate · r)`.
pub fn log_monotone_profile(r: f64, p: &PinchingParams) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Err(Error::NegativeRadius(r));
    }
    let s = p.comparison_curvature().sqrt();
    Ok(log_volume_numerator(s * r) - growth_exponent(p) * r)
}

pub fn monotone_profile(r: f64, p: &PinchingParams) -> Result<f64> {
    Ok(log_monotone_profile(r, p)?.exp())
}

/// `N′(x)/N(x) = 192 sinh⁶x / N(x)`, decreasing from `+∞` to 6.
fn log_derivative_ratio(x: f64) -> f64 {
    let log_sinh6 = if x < 20.0 {
        6.0 * x.sinh().ln()
    } else {
        6.0 * (x - LN_2 + (-(-2.0 * x).exp()).ln_1p())
    };
    (192f64.ln() + log_sinh6 - log_volume_numerator(x)).exp()
}

/// `d ln F / dr = √K2 · 192 sinh⁶(√K2 r) / N(√K2 r) − rate`; same sign as `F′`.
pub fn profile_log_derivative(r: f64, p: &PinchingParams) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    let s = p.comparison_curvature().sqrt();
    Ok(s * log_derivative_ratio(s * r) - growth_exponent(p))
}

/// `(7/18)^{1/4}`.
pub fn pinching_threshold() -> f64 {
    (7.0f64 / 18.0).powf(0.25)
}

/// `rate − √(6 k2)`; zero exactly at the threshold ratio.
pub fn threshold_gap(p: &PinchingParams) -> f64 {
    growth_exponent(p) - (6.0 * p.k2).sqrt()
}

/// Both formulations of the contradiction: `rate > √(6k2)` and
/// `k1/k2 > (7/18)^{1/4}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction {
    pub by_rate: bool,
    pub by_ratio: bool,
}

impl Contradiction {
    pub fn agree(&self) -> bool {
        self.by_rate == self.by_ratio
    }
}

pub fn contradiction(p: &PinchingParams) -> Contradiction {
    Contradiction {
        by_rate: threshold_gap(p) > 0.0,
        by_ratio: p.ratio() > pinching_threshold(),
    }
}

/// The exponential lower bound outruns the comparison volume.
pub fn contradiction_predicate(p: &PinchingParams) -> bool {
    contradiction(p).by_ratio
}

/// Initial root bracket in units with `k2 = 1`.
pub const BRACKET: (f64, f64) = (1e-3, 50.0);
const BRACKET_LIMIT: f64 = 1e8;
/// Bisection stops at this width, relative to `max(1, r)`.
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicBound {
    /// The sign change of `F′` with `k2` normalised to 1.
    pub c: f64,
    /// `C / √k2`.
    pub length: f64,
    pub bisection_steps: usize,
}

/// Locates the unique sign change of `F′` by bracketing and bisection.
pub fn geodesic_bound(p: &PinchingParams) -> Result<GeodesicBound> {
    if !contradiction_predicate(p) {
        return Err(Error::NoGeodesicBound(p.ratio()));
    }
    let unit = PinchingParams::from_ratio(p.ratio(), 1.0)?;
    let f = |r: f64| profile_log_derivative(r, &unit);
    let (mut lo, mut hi) = BRACKET;
    if f(lo)? <= 0.0 {
        return Err(Error::Bracket(format!("F' is not positive at r = {lo}")));
    }
    while f(hi)? >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(Error::Bracket(format!(
                "no sign change of F' below r = {BRACKET_LIMIT}"
            )));
        }
    }
    let mut steps = 0;
    while hi - lo > ROOT_TOLERANCE * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    let c = 0.5 * (lo + hi);
    Ok(GeodesicBound {
        c,
        length: c / p.k2.sqrt(),
        bisection_steps: steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub r: f64,
    pub lower_bound: f64,
    pub comparison_volume: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub rate: f64,
    pub k2_comparison: f64,
    pub samples: Vec<GrowthSample>,
}

/// Samples at `radii` (positive, increasing). The lower bound is
/// `Vol(B(ε)) exp(rate (r − ε))` with `Vol(B(ε))` the Euclidean value at the
/// first radius `ε`.
pub fn growth_profile(p: &PinchingParams, radii: &[f64]) -> Result<GrowthProfile> {
    let Some(&eps) = radii.first() else {
        return Err(Error::Config("growth profile needs at least one radius".into()));
    };
    if radii.windows(2).any(|w| w[1] <= w[0]) || eps <= 0.0 {
        return Err(Error::Config("growth radii must be positive and increasing".into()));
    }
    let rate = growth_exponent(p);
    let k = p.comparison_curvature();
    let base = euclidean_ball_volume(eps);
    let samples = radii
        .iter()
        .map(|&r| {
            Ok(GrowthSample {
                r,
                lower_bound: base * (rate * (r - eps)).exp(),
                comparison_volume: comparison_volume(r, k)?,
                f: monotone_profile(r, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthProfile {
        rate,
        k2_comparison: k,
        samples,
    })
}

/// `n` radii spaced logarithmically on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n.max(2) - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn series_and_closed_form_meet() {
        for x in [1.5f64, 1.9, 2.0] {
            let direct = (6.0 * x).sinh() - 9.0 * (4.0 * x).sinh() + 45.0 * (2.0 * x).sinh() - 60.0 * x;
            assert_relative_eq!(volume_numerator(x), direct, max_relative = 1e-13);
        }
        let x = 2.0 + 1e-9;
        assert_relative_eq!(n_series(x) * x.powi(7), volume_numerator(x), max_relative = 1e-13);
    }

    #[test]
    fn leading_term() {
        assert_relative_eq!(n_series(0.0), 192.0 / 7.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PinchingParams::new(0.0, 1.0).is_err());
        assert!(PinchingParams::new(2.0, 1.0).is_err());
        assert!(comparison_volume(-1.0, 1.0).is_err());
        assert!(comparison_volume(1.0, 0.0).is_err());
    }

    #[test]
    fn einstein_root() {
        let p = PinchingParams::new(1.0, 1.0).unwrap();
        let b = geodesic_bound(&p).unwrap();
        assert!((b.c - 2.05).abs() < 0.01, "{}", b.c);
    }

    #[test]
    fn below_threshold_has_no_bound() {
        let p = PinchingParams::from_ratio(0.5, 1.0).unwrap();
        assert!(matches!(geodesic_bound(&p), Err(Error::NoGeodesicBound(_))));
    }

    #[test]
    fn profile_shape() {
        let p = PinchingParams::new(1.0, 1.0).unwrap();
        let prof = growth_profile(&p, &log_grid(0.01, 30.0, 50)).unwrap();
        assert_eq!(prof.samples.len(), 50);
        assert!(prof.samples.windows(2).all(|w| w[1].lower_bound > w[0].lower_bound));
        assert!(growth_profile(&p, &[]).is_err());
    }
}

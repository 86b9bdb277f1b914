use super::analyze;
use super::identities::FieldResiduals;
use super::pinch::{verify_pinch_bound, PinchReport};
use crate::error::Result;
use crate::fields::TensorField;
use crate::report::{anchors, Check, ConvergenceRow};

/// Accepted range of `residual(h) / residual(h/2)` for second-order stencils.
pub const LADDER_RATIO: (f64, f64) = (3.5, 4.5);

/// Residuals below this at both levels come from stencil-exact data and are
/// checked as tolerances instead of ratios.
pub const ROUNDING_FLOOR: f64 = 1e-11;

/// Safety factor on thresholds `ε_h = c h²` calibrated at the coarsest level.
const SAFETY: f64 = 2.0;

#[derive(Debug, Clone)]
pub struct ConvergenceLevel {
    pub resolution: usize,
    pub residuals: FieldResiduals,
    pub positivity_margin: f64,
    pub pinch: Vec<PinchReport>,
}

#[derive(Debug, Clone)]
pub struct Ladder {
    pub levels: Vec<ConvergenceLevel>,
    /// `c` in `ε_h = c h²` for the `T²` eigenvalue bound.
    pub t2_constant: f64,
    /// `c` in `ε_h = c h²` for the pinch bound.
    pub pinch_constant: f64,
}

/// Builds the structure at each resolution (coarsest first), computes every
/// residual, and runs the pinch bound for each `(k1, k2)`.
pub fn convergence_ladder<F>(build: F, resolutions: &[usize], pinch: &[(f64, f64)]) -> Result<Ladder>
where
    F: Fn(usize) -> Result<TensorField>,
{
    let mut sorted = resolutions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut levels = Vec::with_capacity(sorted.len());
    let (mut t2_constant, mut pinch_constant) = (0.0, 0.0);
    for (i, &n) in sorted.iter().enumerate() {
        let phi = build(n)?;
        let a = analyze(&phi)?;
        let residuals = FieldResiduals::compute(&a)?;
        let h2 = residuals.spacing * residuals.spacing;
        if i == 0 {
            // λ_max(T²) ≤ (2|A| + |S|)|S| for T = A + S with S the symmetric part.
            let s = residuals.antisymmetry;
            t2_constant = SAFETY * (2.0 * residuals.torsion_norm + s) * s / h2;
            pinch_constant = SAFETY * residuals.master / 24.0 / h2;
        }
        let eps = pinch_constant * h2;
        let pinch = pinch
            .iter()
            .map(|&(k1, k2)| verify_pinch_bound(&a, k1, k2, eps))
            .collect::<Result<Vec<_>>>()?;
        levels.push(ConvergenceLevel {
            resolution: n,
            positivity_margin: a.field.positivity_margin(),
            residuals,
            pinch,
        });
    }
    Ok(Ladder {
        levels,
        t2_constant,
        pinch_constant,
    })
}

impl Ladder {
    pub fn resolutions(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.resolution).collect()
    }

    /// `residual(coarse) / residual(fine)` for consecutive levels.
    pub fn ratios(&self, name: &str) -> Vec<f64> {
        let values: Vec<f64> = self
            .levels
            .iter()
            .filter_map(|l| {
                l.residuals
                    .convergent()
                    .into_iter()
                    .find(|(n, _, _)| *n == name)
                    .map(|(_, _, v)| v)
            })
            .collect();
        values.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// One convergence check per identity and consecutive pair of levels.
    pub fn convergence_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for w in self.levels.windows(2) {
            let (c, f) = (&w[0], &w[1]);
            for ((name, anchor, rc), (_, _, rf)) in c.residuals.convergent().into_iter().zip(f.residuals.convergent()) {
                let label = format!("{name}@{}->{}", c.resolution, f.resolution);
                if rc <= ROUNDING_FLOOR && rf <= ROUNDING_FLOOR {
                    out.push(
                        Check::tolerance(label, anchor, rf, ROUNDING_FLOOR)
                            .with_note(format!("stencil-exact: {rc:.3e} and {rf:.3e} at rounding level")),
                    );
                } else {
                    out.push(Check::convergence(label, anchor, rc, rf, LADDER_RATIO));
                }
            }
        }
        out
    }

    /// `T²` semidefiniteness and the pinch bound at every level.
    pub fn sign_checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        for l in &self.levels {
            let h2 = l.residuals.spacing * l.residuals.spacing;
            let eps = self.t2_constant * h2;
            out.push(
                Check::tolerance(
                    format!("field.t2_semidefinite@{}", l.resolution),
                    anchors::T2_SEMIDEFINITE,
                    l.residuals.t2_max_eigenvalue.max(0.0),
                    eps,
                )
                .with_note(format!(
                    "max eigenvalue {:.6e}; eps_h = {:.6e} h^2",
                    l.residuals.t2_max_eigenvalue, self.t2_constant
                )),
            );
            for p in &l.pinch {
                let margin = p.min_margin.map_or(0.0, |m| (-m).max(0.0));
                let mut c = Check::tolerance(
                    format!("field.pinch_bound@{}[k1={},k2={}]", l.resolution, p.k1, p.k2),
                    anchors::PINCH_BOUND,
                    margin,
                    p.epsilon,
                )
                .with_note(format!(
                    "hypothesis holds at {} of {} points ({} excluded)",
                    p.hypothesis_points, p.points, p.excluded
                ));
                c.pass = p.min_margin.is_none_or(|m| m >= -p.epsilon);
                out.push(c);
                let sign = p.min_rtt_negative.map_or(0.0, |m| (-m).max(0.0));
                let mut s = Check::tolerance(
                    format!("field.rtt_sign@{}[k1={},k2={}]", l.resolution, p.k1, p.k2),
                    anchors::RTT_SIGN,
                    sign,
                    p.epsilon,
                )
                .with_note(format!("Ric < 0 at {} of {} points", p.negative_ricci_points, p.points));
                s.pass = p.min_rtt_negative.is_none_or(|m| m >= -p.epsilon);
                out.push(s);
            }
        }
        out
    }

    /// Plot-ready table: one row per identity and level.
    pub fn rows(&self) -> Vec<ConvergenceRow> {
        let mut out = Vec::new();
        for l in &self.levels {
            for (name, _, v) in l.residuals.convergent() {
                out.push(ConvergenceRow {
                    check: name.to_string(),
                    resolution: l.resolution,
                    spacing: l.residuals.spacing,
                    residual: v,
                });
            }
        }
        out
    }
}

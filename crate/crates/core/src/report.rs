//! Verification reports: named checks with residuals and pass/fail, plus the
//! plot-ready tables, with JSON, CSV and text emitters.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Anchor tag for checks that only exercise infrastructure.
pub const PLUMBING: &str = "plumbing";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or inequality the check certifies, or [`PLUMBING`].
    pub anchor: String,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_ratio: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// `residual <= tolerance`.
    pub fn tolerance(name: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            residual,
            tolerance: Some(tolerance),
            convergence_ratio: None,
            pass: residual.is_finite() && residual <= tolerance,
            note: None,
        }
    }

    /// Ratio of residuals at `h` and `h/2` must land in `[lo, hi]`.
    pub fn convergence(
        name: impl Into<String>,
        anchor: impl Into<String>,
        coarse: f64,
        fine: f64,
        (lo, hi): (f64, f64),
    ) -> Self {
        let ratio = coarse / fine;
        Check {
            name: name.into(),
            anchor: anchor.into(),
            residual: fine,
            tolerance: None,
            convergence_ratio: Some(ratio),
            pass: ratio.is_finite() && (lo..=hi).contains(&ratio),
            note: Some(format!("coarse residual {coarse:.6e}; accepted ratio [{lo}, {hi}]")),
        }
    }

    /// A recorded observation that does not gate the run.
    pub fn observation(
        name: impl Into<String>,
        anchor: impl Into<String>,
        value: f64,
        note: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            residual: value,
            tolerance: None,
            convergence_ratio: None,
            pass: true,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub resolutions: Vec<usize>,
    pub seed: u64,
    /// Only recorded on request; a timed report is not byte-reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub r: f64,
    pub lower_bound: f64,
    pub comparison_volume: f64,
    pub profile: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub check: String,
    pub resolution: usize,
    pub spacing: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub growth: Vec<GrowthRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub checks: Vec<Check>,
    pub environment: Environment,
    pub summary: Summary,
    #[serde(default)]
    pub tables: Tables,
}

impl Default for VerificationReport {
    fn default() -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            checks: Vec::new(),
            environment: Environment::default(),
            summary: Summary::default(),
            tables: Tables::default(),
        }
    }
}

impl VerificationReport {
    pub fn new(seed: u64) -> Self {
        VerificationReport {
            environment: Environment {
                seed,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.pass {
            self.summary.pass += 1;
        } else {
            self.summary.fail += 1;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    /// Folds another report's checks, tables and resolutions into this one.
    pub fn merge(&mut self, other: VerificationReport) {
        self.extend(other.checks);
        self.tables.growth.extend(other.tables.growth);
        self.tables.convergence.extend(other.tables.convergence);
        for r in other.environment.resolutions {
            if !self.environment.resolutions.contains(&r) {
                self.environment.resolutions.push(r);
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Process exit status: number of failed checks, capped at 125.
    pub fn exit_code(&self) -> i32 {
        self.summary.fail.min(125) as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit_report(rep: &VerificationReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rep)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => Ok(emit_csv(rep).into_bytes()),
        Format::Text => Ok(emit_text(rep).into_bytes()),
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<VerificationReport> {
    Ok(serde_json::from_slice(bytes)?)
}

/// The growth table as CSV: `r,lower_bound,comparison_volume,profile`.
pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut s = String::from("r,lower_bound,comparison_volume,profile\n");
    for row in rows {
        let _ = writeln!(
            s,
            "{:e},{:e},{:e},{:e}",
            row.r, row.lower_bound, row.comparison_volume, row.profile
        );
    }
    s
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("check,resolution,spacing,residual\n");
    for row in rows {
        let _ = writeln!(
            s,
            "{},{},{:e},{:e}",
            row.check, row.resolution, row.spacing, row.residual
        );
    }
    s
}

fn emit_csv(rep: &VerificationReport) -> String {
    let mut s = String::from("name,anchor,residual,tolerance,convergence_ratio,pass\n");
    for c in &rep.checks {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{:e},{},{},{}",
            csv_field(&c.name),
            csv_field(&c.anchor),
            c.residual,
            opt(c.tolerance),
            opt(c.convergence_ratio),
            c.pass
        );
    }
    if !rep.tables.growth.is_empty() {
        s.push('\n');
        s.push_str(&growth_csv(&rep.tables.growth));
    }
    if !rep.tables.convergence.is_empty() {
        s.push('\n');
        s.push_str(&convergence_csv(&rep.tables.convergence));
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn emit_text(rep: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &rep.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = write!(s, "[{status}] {:<48} residual {:>12.4e}", c.name, c.residual);
        if let Some(t) = c.tolerance {
            let _ = write!(s, "  tol {t:.1e}");
        }
        if let Some(r) = c.convergence_ratio {
            let _ = write!(s, "  ratio {r:.3}");
        }
        s.push('\n');
        if let Some(note) = &c.note {
            let _ = writeln!(s, "       {note}");
        }
    }
    let env = &rep.environment;
    let _ = writeln!(
        s,
        "\n{} passed, {} failed (seed {}, resolutions {:?})",
        rep.summary.pass, rep.summary.fail, env.seed, env.resolutions
    );
    if let Some(ms) = env.wall_time_ms {
        let _ = writeln!(s, "wall time {ms} ms");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let rep = VerificationReport::new(7);
        let bytes = emit_report(&rep, Format::Json).unwrap();
        let back = parse_report(&bytes).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.exit_code(), 0);
    }

    #[test]
    fn unknown_format_rejected() {
        assert!(matches!("yaml".parse::<Format>(), Err(Error::UnknownFormat(_))));
    }

    #[test]
    fn exit_code_caps_at_125() {
        let mut rep = VerificationReport::new(0);
        for i in 0..200 {
            rep.push(Check::tolerance(format!("c{i}"), PLUMBING, 1.0, 0.0));
        }
        assert_eq!(rep.exit_code(), 125);
    }

    #[test]
    fn growth_csv_header() {
        let rows = vec![GrowthRow {
            r: 1.0,
            lower_bound: 2.0,
            comparison_volume: 3.0,
            profile: 4.0,
        }];
        let csv = growth_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("r,lower_bound,comparison_volume,profile"));
        let cols: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(cols, vec![1.0, 2.0, 3.0, 4.0]);
    }
}

/// Anchor strings: the identity or inequality each check certifies.
pub mod anchors {
    pub const PHI_NORM: &str = "phi ^ *phi = 7 Vol";
    pub const PHI_CONTRACTION: &str = "phi_ljk phi_p^jk = 6 g_lp";
    pub const IPHI_METRIC: &str = "i_phi(g) = 3 phi";
    pub const OMEGA14_SIGN: &str = "eta ^ phi = -*eta on Omega^2_14";
    pub const ETA_SQUARED: &str = "|eta^2|^2 = |eta|^4 on Omega^2_14";
    pub const ETA_CUBED: &str = "|eta^3|^2 <= (2/3)|eta|^6 on Omega^2_14";
    pub const IPHI_PAIRING: &str = "i_phi(U) ^ *i_phi(V) = (tr U tr V + 2 <U,V>) Vol";
    pub const METRIC_FROM_PHI: &str = "g(X,Y) Vol = (1/6) i_X phi ^ i_Y phi ^ phi";
    pub const TWO_FORM_SPLIT: &str = "Omega^2 = Omega^2_7 + Omega^2_14";
    pub const THREE_FORM_SPLIT: &str = "Omega^3 = Omega^3_1 + Omega^3_7 + Omega^3_27";
    pub const CLOSED: &str = "d phi = 0";
    pub const TORSION: &str = "T_ij = (1/24) nabla_i phi_abc psi_j^abc";
    pub const TORSION_ANTISYMMETRIC: &str = "T_ij = -T_ji";
    pub const SCALAR_TORSION: &str = "R = -|T|^2 = -(1/2)|tau|^2";
    pub const LAPLACIAN: &str = "d tau = Delta_phi phi";
    pub const DTAU_SPLIT: &str = "d tau = (1/7)|tau|^2 phi + gamma_27";
    pub const RICCI_FORMULA: &str = "i_phi(Ric) = -d tau + (1/2)*(tau ^ tau)";
    pub const RICCI_TRACE_FORM: &str = "i_phi(-Ric + (1/3) R g - 2 T^2) = d tau";
    pub const IPHI_T2: &str = "i_phi(T^2) = -(1/4)*(tau^2) + (1/2) R phi";
    pub const MASTER: &str = "24 R_ij T^il T_l^j = *d(tau^3)";
    pub const MASTER_INTEGRAL: &str = "integral of R_ij T^il T_l^j over a closed manifold = 0";
    pub const T2_SEMIDEFINITE: &str = "T^2 is negative semidefinite";
    pub const PINCH_BOUND: &str = "R_ij T^il T_l^j >= k1 |R| under -k2 g <= Ric <= -k1 g";
    pub const RTT_SIGN: &str = "R_ij T^il T_l^j >= 0 where Ric < 0";
    pub const GROWTH_RATE: &str = "Vol(B(r)) >= Vol(B(eps)) exp(6 sqrt(3) k1^2 / (sqrt(7) k2^(3/2)) (r - eps))";
    pub const COMPARISON_VOLUME: &str = "Vol_{-K2}(B(r)) = Vol(S^6) int_0^r (sinh(sqrt(K2) s) / sqrt(K2))^6 ds";
    pub const MONOTONE_PROFILE: &str = "sinh-combination / exp(rate r) is nondecreasing";
    pub const THRESHOLD: &str = "k1/k2 > (7/18)^(1/4)";
    pub const CONTRADICTION: &str = "6 sqrt(3) k1^2 / (sqrt(7) k2^(3/2)) > sqrt(6 k2)";
    pub const GEODESIC_BOUND: &str = "geodesic bound C(k1, k2) / sqrt(k2); Einstein C ~ 2.05";

    /// Every anchor, for validating reports.
    pub const ALL: &[&str] = &[
        PHI_NORM,
        PHI_CONTRACTION,
        IPHI_METRIC,
        OMEGA14_SIGN,
        ETA_SQUARED,
        ETA_CUBED,
        IPHI_PAIRING,
        METRIC_FROM_PHI,
        TWO_FORM_SPLIT,
        THREE_FORM_SPLIT,
        CLOSED,
        TORSION,
        TORSION_ANTISYMMETRIC,
        SCALAR_TORSION,
        LAPLACIAN,
        DTAU_SPLIT,
        RICCI_FORMULA,
        RICCI_TRACE_FORM,
        IPHI_T2,
        MASTER,
        MASTER_INTEGRAL,
        T2_SEMIDEFINITE,
        PINCH_BOUND,
        RTT_SIGN,
        GROWTH_RATE,
        COMPARISON_VOLUME,
        MONOTONE_PROFILE,
        THRESHOLD,
        CONTRADICTION,
        GEODESIC_BOUND,
    ];
}

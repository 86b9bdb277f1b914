//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output; exits 1 on any FAIL.
//!
//!     cargo test --release --test acceptance

use std::time::{Duration, Instant};

use closed_g2::g2::exact::flat_exact_battery;
use closed_g2::g2::{pointwise_identity_battery, G2Point};
use closed_g2::harness::{
    convergence_suite, growth_suite, run_suites, synthetic_pinch, GrowthConfig, RunConfig, Suite, SuiteRng,
};
use closed_g2::properties::random_positive_point;
use closed_g2::report::{Check, VerificationReport};
use rand::SeedableRng;

const SEED: u64 = 20_240_601;

// pointwise battery
const BATTERY_SAMPLES: usize = 100;
const BATTERY_TOL: f64 = 1e-10;
const BATTERY_BUDGET: Duration = Duration::from_secs(10);
// field identities
const LADDER: [usize; 2] = [20, 40];
const RATIO_RANGE: (f64, f64) = (3.5, 4.5);
const LADDER_BUDGET: Duration = Duration::from_secs(300);
const SYNTHETIC_SAMPLES: usize = 200;
const SYNTHETIC_TOL: f64 = 1e-12;
// growth analytics
const THRESHOLD_STATED: f64 = 0.7897;
const THRESHOLD_DECIMALS_TOL: f64 = 5e-5;
const SUBSTITUTION_TOL: f64 = 1e-12;
const QUADRATURE_TOL: f64 = 1e-10;
const EINSTEIN_C: f64 = 2.05;
const EINSTEIN_C_TOL: f64 = 0.01;
const GROWTH_BUDGET: Duration = Duration::from_secs(5);
// predicate
const FLIP_WIDTH: f64 = 1e-12;
// property suite
const PROPERTY_BUDGET: Duration = Duration::from_secs(120);

struct Outcome {
    ok: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            lines: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.ok = false;
            self.lines.push(format!("    failed: {what}"));
        }
    }

    fn check(&mut self, rep: &VerificationReport, name: &str) -> Option<Check> {
        match rep.check(name) {
            Some(c) => {
                self.require(c.pass, format!("{name} (residual {:.3e})", c.residual));
                Some(c.clone())
            }
            None => {
                self.require(false, format!("{name} missing"));
                None
            }
        }
    }

    fn ratio(&mut self, rep: &VerificationReport, name: &str) -> f64 {
        let ratio = self
            .check(rep, name)
            .and_then(|c| c.convergence_ratio)
            .unwrap_or(f64::NAN);
        self.require(
            (RATIO_RANGE.0..=RATIO_RANGE.1).contains(&ratio),
            format!("{name} ratio {ratio:.3} outside {RATIO_RANGE:?}"),
        );
        ratio
    }

    fn within(&mut self, elapsed: Duration, budget: Duration) {
        self.require(elapsed <= budget, format!("took {elapsed:.1?}, budget {budget:?}"));
    }
}

fn print(n: usize, title: &str, detail: &str, o: &Outcome) -> bool {
    println!(
        "{} criterion {n}: {title} ({detail})",
        if o.ok { "PASS" } else { "FAIL" }
    );
    for l in &o.lines {
        println!("{l}");
    }
    o.ok
}

fn pointwise_battery() -> bool {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut rng = SuiteRng::seed_from_u64(SEED);
    let rep = pointwise_identity_battery(&G2Point::flat(), BATTERY_SAMPLES, &mut rng).unwrap();
    let mut worst: f64 = 0.0;
    for id in [
        "phi_norm",
        "phi_contraction",
        "i_phi_metric",
        "i_phi_pairing",
        "omega14_sign",
        "eta_squared",
        "eta_cubed",
    ] {
        let name = format!("pointwise.{id}");
        if let Some(c) = o.check(&rep, &name) {
            o.require(c.residual <= BATTERY_TOL, format!("{name} residual {:.3e}", c.residual));
            worst = worst.max(c.residual);
        }
    }
    let exact = flat_exact_battery(BATTERY_SAMPLES, &mut rng).unwrap();
    for c in &exact.checks {
        o.require(
            c.pass && c.residual == 0.0,
            format!("{} exact residual {}", c.name, c.residual),
        );
    }
    o.require(!exact.checks.is_empty(), "exact battery ran");
    let elapsed = start.elapsed();
    o.within(elapsed, BATTERY_BUDGET);
    print(
        1,
        "pointwise battery",
        &format!(
            "max residual {worst:.2e}, {} exact checks at 0, {elapsed:.2?}",
            exact.checks.len()
        ),
        &o,
    )
}

fn growth_analytics() -> bool {
    let mut o = Outcome::new();
    let start = Instant::now();
    let rep = growth_suite(&GrowthConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let th = closed_g2::growth::pinching_threshold();
    o.require(
        (th - THRESHOLD_STATED).abs() < THRESHOLD_DECIMALS_TOL,
        format!("threshold {th}"),
    );
    o.require(((7.0f64 / 18.0).powf(0.25) - th).abs() < 1e-15, "threshold closed form");
    for (name, tol) in [
        ("growth.threshold_substitution", SUBSTITUTION_TOL),
        ("growth.rate", SUBSTITUTION_TOL),
        ("growth.rate_einstein", SUBSTITUTION_TOL),
        ("growth.comparison_volume_quadrature", QUADRATURE_TOL),
    ] {
        if let Some(c) = o.check(&rep, name) {
            o.require(
                c.residual <= tol,
                format!("{name} residual {:.3e} > {tol:e}", c.residual),
            );
        }
    }
    let einstein = closed_g2::growth::PinchingParams::new(1.0, 1.0).unwrap();
    let c = closed_g2::growth::geodesic_bound(&einstein).unwrap().c;
    o.require((c - EINSTEIN_C).abs() <= EINSTEIN_C_TOL, format!("C = {c}"));
    o.check(&rep, "growth.geodesic_einstein");
    o.within(elapsed, GROWTH_BUDGET);
    print(
        5,
        "growth analytics",
        &format!("threshold {th:.6}, C = {c:.4}, {elapsed:.2?}"),
        &o,
    )
}

fn predicate() -> bool {
    let mut o = Outcome::new();
    let (lo, hi) = closed_g2::harness::predicate_flip().unwrap();
    let th = closed_g2::growth::pinching_threshold();
    o.require(hi - lo <= FLIP_WIDTH, format!("bracket width {:.3e}", hi - lo));
    o.require(
        lo <= th + FLIP_WIDTH && th <= hi + FLIP_WIDTH,
        format!("flip [{lo}, {hi}] misses {th}"),
    );
    use closed_g2::growth::{contradiction_predicate, PinchingParams};
    let at = |r: f64| contradiction_predicate(&PinchingParams::from_ratio(r, 1.0).unwrap());
    o.require(at(1.0), "true at ratio 1");
    o.require(!at(1.0 / 3.0), "false at ratio 1/3");
    let rep = growth_suite(&GrowthConfig::default()).unwrap();
    o.check(&rep, "growth.predicate_flip");
    o.check(&rep, "growth.predicate_cases");
    o.check(&rep, "growth.consistency");
    print(6, "predicate coherence", &format!("flip in [{lo:.15}, {hi:.15}]"), &o)
}

fn property_suite() -> bool {
    let mut o = Outcome::new();
    let start = Instant::now();
    let cfg = RunConfig {
        suites: vec![Suite::Properties],
        seed: SEED,
        ..Default::default()
    };
    let rep = run_suites(&cfg).unwrap();
    let elapsed = start.elapsed();
    for name in [
        "property.two_form_idempotent@random",
        "property.two_form_annihilating@random",
        "property.two_form_ranks@random",
        "property.three_form_idempotent@random",
        "property.three_form_annihilating@random",
        "property.three_form_ranks@random",
        "property.i_phi_round_trip@random",
        "property.i_phi_image@random",
        "property.d_squared",
        "property.hodge_involution",
        "property.metric_equivariance",
    ] {
        o.check(&rep, name);
    }
    o.require(
        rep.summary.fail == 0,
        format!("{} property checks failed", rep.summary.fail),
    );
    o.within(elapsed, PROPERTY_BUDGET);
    print(
        7,
        "property suite",
        &format!("{} checks, {elapsed:.2?}", rep.checks.len()),
        &o,
    )
}

fn field_criteria() -> [bool; 3] {
    let cfg = RunConfig {
        suites: vec![Suite::Convergence],
        seed: SEED,
        convergence: closed_g2::harness::ConvergenceConfig {
            resolutions: LADDER.to_vec(),
        },
        ..Default::default()
    };
    let start = Instant::now();
    let (rep, ladder) = convergence_suite(&cfg).unwrap();
    let elapsed = start.elapsed();
    let pair = format!("{}->{}", LADDER[0], LADDER[1]);

    let mut o2 = Outcome::new();
    let m = o2.ratio(&rep, &format!("field.master_identity@{pair}"));
    let mi = o2.ratio(&rep, &format!("field.master_integral@{pair}"));
    o2.within(elapsed, LADDER_BUDGET);
    let ok2 = print(
        2,
        "master identity",
        &format!("ratios {m:.3} (pointwise), {mi:.3} (integral), ladder {LADDER:?} in {elapsed:.1?}"),
        &o2,
    );

    let mut o3 = Outcome::new();
    let mut ratios = Vec::new();
    for name in [
        "ricci_formula",
        "ricci_trace_form",
        "i_phi_t2",
        "laplacian",
        "dtau_omega1",
        "dtau_omega7",
    ] {
        ratios.push(format!("{name} {:.3}", o3.ratio(&rep, &format!("field.{name}@{pair}"))));
    }
    let ok3 = print(3, "Ricci formula chain", &ratios.join(", "), &o3);

    let mut o4 = Outcome::new();
    for n in LADDER {
        o4.check(&rep, &format!("field.t2_semidefinite@{n}"));
        o4.check(&rep, &format!("field.tau_half@{n}"));
    }
    let st = o4.ratio(&rep, &format!("field.scalar_torsion@{pair}"));
    let mut hypothesis = 0;
    for l in &ladder.levels {
        for p in &l.pinch {
            hypothesis += p.hypothesis_points;
            let label = format!("field.pinch_bound@{}[k1={},k2={}]", l.resolution, p.k1, p.k2);
            o4.check(&rep, &label);
        }
    }
    let mut rng = SuiteRng::seed_from_u64(SEED);
    for pt in [G2Point::flat(), random_positive_point(&mut rng)] {
        let worst = synthetic_pinch(&pt, SYNTHETIC_SAMPLES, &mut rng).unwrap();
        o4.require(worst <= SYNTHETIC_TOL, format!("synthetic pinch shortfall {worst:.3e}"));
    }
    let t2 = ladder
        .levels
        .iter()
        .map(|l| l.residuals.t2_max_eigenvalue)
        .fold(f64::MIN, f64::max);
    let ok4 = print(
        4,
        "sign facts",
        &format!(
            "max eig T^2 {t2:.2e}, scalar torsion ratio {st:.3}, pinch hypothesis at {hypothesis} gallery points, synthetic pinch holds"
        ),
        &o4,
    );
    [ok2, ok3, ok4]
}

fn main() {
    // libtest flags are ignored; a name filter that cannot match skips the run
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance criterion".contains(f.as_str())) {
        return;
    }
    let mut ok = vec![pointwise_battery()];
    ok.extend(field_criteria());
    ok.extend([growth_analytics(), predicate(), property_suite()]);
    let passed = ok.iter().filter(|x| **x).count();
    println!("acceptance: {passed}/{} criteria passed", ok.len());
    if passed != ok.len() {
        std::process::exit(1);
    }
}

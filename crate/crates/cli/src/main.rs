//! `g2verify`: runs the verification suites and writes reports.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use closed_g2::fields::write_snapshot;
use closed_g2::gallery::positivity_margin;
use closed_g2::harness::{build_gallery, run_suites, RunConfig, Suite};
use closed_g2::report::{emit_report, Format};

/// Exit status for configuration and input errors.
const CONFIG_ERROR: u8 = 126;

#[derive(Parser)]
#[command(name = "g2verify", version, about = "Numerical checks for closed G2-structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pointwise identity battery and the property suite.
    VerifyPointwise(Common),
    /// Torsion identity chain and sign facts on one structure.
    VerifyField(Common),
    /// Volume growth, threshold and geodesic bound analytics.
    Growth(Common),
    /// Order-2 convergence ladder over several resolutions.
    Convergence(Common),
    /// Build the configured structure and write a binary snapshot.
    Gallery(Common),
    /// The suites listed in the config (or by --suite).
    Run(Common),
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run; repeatable. Overrides the subcommand's default.
    #[arg(long)]
    suite: Vec<Suite>,
    /// Points per active axis. For `convergence`, repeat to give the ladder.
    #[arg(long)]
    resolution: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// json, csv or text.
    #[arg(long, default_value = "text")]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time in the report (breaks byte reproducibility).
    #[arg(long)]
    wall_time: bool,
}

fn load(common: &Common, defaults: &[Suite]) -> closed_g2::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !defaults.is_empty() {
        cfg.suites = defaults.to_vec();
    }
    if !common.suite.is_empty() {
        cfg.suites = common.suite.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    match common.resolution.as_slice() {
        [] => {}
        [n] => cfg.chart.resolution = *n,
        many => cfg.convergence.resolutions = many.to_vec(),
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(out: &Option<PathBuf>, bytes: &[u8]) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("g2verify: {msg}");
    ExitCode::from(CONFIG_ERROR)
}

fn gallery(common: &Common) -> ExitCode {
    let cfg = match load(common, &[]) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let phi = match build_gallery(&cfg) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let margin = positivity_margin(&phi).expect("validated on construction");
    let Some(path) = &common.out else {
        return fail("gallery needs --out for the snapshot");
    };
    let file = match std::fs::File::create(path) {
        Ok(f) => f,
        Err(e) => return fail(format!("{}: {e}", path.display())),
    };
    if let Err(e) = write_snapshot(&phi, std::io::BufWriter::new(file)) {
        return fail(e);
    }
    eprintln!(
        "wrote {} ({} points, resolution {:?}, positivity margin {margin:.6})",
        path.display(),
        phi.point_count(),
        phi.chart().resolution()
    );
    ExitCode::SUCCESS
}

fn suites(common: &Common, defaults: &[Suite]) -> ExitCode {
    let cfg = match load(common, defaults) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let start = Instant::now();
    let mut rep = match run_suites(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if common.wall_time {
        rep.environment.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    let bytes = match emit_report(&rep, common.format) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    if let Err(e) = write_out(&common.out, &bytes) {
        return fail(e);
    }
    ExitCode::from(rep.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CONFIG_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match &cli.command {
        Command::VerifyPointwise(c) => suites(c, &[Suite::Pointwise, Suite::Properties]),
        Command::VerifyField(c) => suites(c, &[Suite::Field]),
        Command::Growth(c) => suites(c, &[Suite::Growth]),
        Command::Convergence(c) => suites(c, &[Suite::Convergence]),
        Command::Gallery(c) => gallery(c),
        Command::Run(c) => suites(c, &[]),
    }
}

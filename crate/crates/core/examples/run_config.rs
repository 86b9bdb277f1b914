//! Runs the suites named in a JSON config; prints the default config when
//! no path is given.
//!
//!     cargo run --release --example run_config -- config.json

use closed_g2::harness::{run_suites, RunConfig};
use closed_g2::report::{emit_report, Format};

fn main() -> closed_g2::Result<()> {
    let Some(path) = std::env::args().nth(1) else {
        println!("{}", serde_json::to_string_pretty(&RunConfig::default())?);
        return Ok(());
    };
    let cfg = RunConfig::load(path.as_ref())?;
    let rep = run_suites(&cfg)?;
    print!("{}", String::from_utf8_lossy(&emit_report(&rep, Format::Text)?));
    std::process::exit(rep.exit_code());
}

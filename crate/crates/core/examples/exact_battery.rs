//! Flat-model identities in exact rational arithmetic: every residual is 0.

use closed_g2::g2::exact::flat_exact_battery;
use closed_g2::harness::SuiteRng;
use closed_g2::report::{emit_report, Format};
use rand::SeedableRng;

fn main() -> closed_g2::Result<()> {
    let samples = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let rep = flat_exact_battery(samples, &mut SuiteRng::seed_from_u64(0))?;
    print!("{}", String::from_utf8_lossy(&emit_report(&rep, Format::Text)?));
    Ok(())
}

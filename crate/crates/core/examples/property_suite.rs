//! Projector, round-trip, d² and equivariance invariants.

use closed_g2::harness::SuiteRng;
use closed_g2::properties::{property_suite, PropertyConfig};
use closed_g2::report::{emit_report, Format};
use rand::SeedableRng;

fn main() -> closed_g2::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let rep = property_suite(&PropertyConfig::default(), &mut SuiteRng::seed_from_u64(seed))?;
    print!("{}", String::from_utf8_lossy(&emit_report(&rep, Format::Text)?));
    std::process::exit(rep.exit_code());
}

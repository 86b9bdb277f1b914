//! Identity battery at the flat point and at a random positive 3-form.
//!
//!     cargo run --release --example pointwise_battery -- 100 7

use closed_g2::g2::{pointwise_identity_battery, G2Point};
use closed_g2::harness::SuiteRng;
use closed_g2::properties::random_positive_point;
use closed_g2::report::{emit_report, Format};
use rand::SeedableRng;

fn main() -> closed_g2::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let mut rng = SuiteRng::seed_from_u64(seed);
    let mut rep = pointwise_identity_battery(&G2Point::flat(), samples, &mut rng)?;
    let pt = random_positive_point(&mut rng);
    rep.merge(pointwise_identity_battery(&pt, samples, &mut rng)?);
    print!("{}", String::from_utf8_lossy(&emit_report(&rep, Format::Text)?));
    Ok(())
}

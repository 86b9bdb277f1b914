//! The constant C(k1/k2) as the pinching ratio approaches the threshold.

use closed_g2::error::Error;
use closed_g2::growth::{contradiction_predicate, geodesic_bound, pinching_threshold, PinchingParams};

fn main() -> closed_g2::Result<()> {
    let th = pinching_threshold();
    println!("threshold {th:.12}");
    for ratio in [1.0, 0.95, 0.9, 0.85, 0.8, th + 1e-3, th + 1e-5, th, 0.5, 1.0 / 3.0] {
        let p = PinchingParams::from_ratio(ratio, 1.0)?;
        match geodesic_bound(&p) {
            Ok(b) => println!("{ratio:.8}  C = {:.8}  ({} bisection steps)", b.c, b.bisection_steps),
            Err(Error::NoGeodesicBound(_)) => {
                println!("{ratio:.8}  no bound (predicate {})", contradiction_predicate(&p))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

//! Volume lower bound, comparison volume and monotone profile as CSV.
//!
//!     cargo run --example growth_profile -- 1.0 1.0 > growth.csv

use closed_g2::growth::{growth_exponent, growth_profile, log_grid, PinchingParams};
use closed_g2::report::{growth_csv, GrowthRow};

fn main() -> closed_g2::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>().expect("number"));
    let k1 = args.next().unwrap_or(1.0);
    let k2 = args.next().unwrap_or(1.0);
    let p = PinchingParams::new(k1, k2)?;
    eprintln!("rate {:.10}", growth_exponent(&p));
    let prof = growth_profile(&p, &log_grid(0.01, 20.0, 80))?;
    let rows: Vec<GrowthRow> = prof
        .samples
        .iter()
        .map(|s| GrowthRow {
            r: s.r,
            lower_bound: s.lower_bound,
            comparison_volume: s.comparison_volume,
            profile: s.f,
        })
        .collect();
    print!("{}", growth_csv(&rows));
    Ok(())
}

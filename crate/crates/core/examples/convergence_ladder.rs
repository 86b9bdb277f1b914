//! Residuals of every field identity on `φ₀ + t dβ` at two resolutions.
//! Ratios only settle near 4 from about 20 points per axis; coarse pairs
//! such as 8 16 show the pre-asymptotic regime quickly.
//!
//!     cargo run --release --example convergence_ladder -- 20 40

use closed_g2::gallery::{gallery_chart, perturbed_closed, BetaSpec, DEFAULT_AMPLITUDE};
use closed_g2::torsion::convergence_ladder;

fn main() -> closed_g2::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let resolutions = if args.is_empty() { vec![8, 16] } else { args };
    let beta = BetaSpec::trigonometric();
    let ladder = convergence_ladder(
        |n| perturbed_closed(&gallery_chart(&beta, n)?, &beta, DEFAULT_AMPLITUDE),
        &resolutions,
        &[],
    )?;
    for row in ladder.rows() {
        println!(
            "{:<28} n={:<3} h={:.4} residual={:.4e}",
            row.check, row.resolution, row.spacing, row.residual
        );
    }
    for c in ladder.convergence_checks() {
        println!(
            "{:<40} {} ratio={:.3}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.convergence_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

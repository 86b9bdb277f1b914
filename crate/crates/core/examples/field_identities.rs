//! Residuals of the torsion identity chain on the gallery at one resolution.
//!
//!     cargo run --release --example field_identities -- 16

use closed_g2::gallery::{gallery_chart, perturbed_closed, BetaSpec, DEFAULT_AMPLITUDE};
use closed_g2::torsion::{analyze, FieldResiduals};

fn main() -> closed_g2::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let beta = BetaSpec::default();
    let phi = perturbed_closed(&gallery_chart(&beta, n)?, &beta, DEFAULT_AMPLITUDE)?;
    let a = analyze(&phi)?;
    let res = FieldResiduals::compute(&a)?;
    println!("n = {n}, max |T|^2 = {:.4e}", res.torsion_scale);
    for (name, anchor, v) in res.convergent() {
        println!("{name:<24} {v:>12.4e}   {anchor}");
    }
    println!("max eigenvalue of T^2 {:.4e}", res.t2_max_eigenvalue);
    println!("|T|^2 - |tau|^2 / 2 {:.4e}", res.tau_half);
    Ok(())
}

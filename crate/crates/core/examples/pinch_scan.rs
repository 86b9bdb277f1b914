//! Ricci spectrum on the gallery structure and the pinch bound for
//! `(k1, k2)` pairs read from it.
//!
//!     cargo run --release --example pinch_scan -- 20

use closed_g2::fields::TensorField;
use closed_g2::gallery::{gallery_chart, perturbed_closed, BetaSpec, DEFAULT_AMPLITUDE};
use closed_g2::torsion::{analyze, verify_pinch_bound};

fn main() -> closed_g2::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let beta = BetaSpec::trigonometric();
    let phi = perturbed_closed(&gallery_chart(&beta, n)?, &beta, DEFAULT_AMPLITUDE)?;
    let a = analyze(&phi)?;
    let field = &a.field;
    let spectrum = TensorField::zip_map(
        &[&a.curvature.ricci],
        closed_g2::fields::Valence::Form(1),
        |g, ins, out| {
            let ric: [[f64; 7]; 7] = std::array::from_fn(|i| std::array::from_fn(|j| ins[0][i * 7 + j]));
            let ev = closed_g2::g2::SymmetricTwoTensor::symmetrized(&ric).eigenvalues(field.point_at(&g).metric());
            out.copy_from_slice(&ev);
        },
    )?;
    let (mut lo, mut hi, mut neg) = (f64::INFINITY, f64::NEG_INFINITY, 0);
    for p in 0..spectrum.point_count() {
        let ev = spectrum.point_values(p);
        lo = lo.min(ev[0]);
        hi = hi.max(ev[6]);
        if ev[6] < 0.0 {
            neg += 1;
        }
    }
    println!(
        "points {} Ric eigenvalues in [{lo:.4e}, {hi:.4e}], negative definite at {neg}",
        spectrum.point_count()
    );
    for (k1, k2) in [(1e-4, 1e-2), (1e-3, 1e-2), (1e-3, 1.0)] {
        let r = verify_pinch_bound(&a, k1, k2, 0.0)?;
        println!("{r:?}");
    }
    Ok(())
}

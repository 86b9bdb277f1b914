//! Ricci and scalar curvature of the round 7-sphere in stereographic
//! coordinates, on one stencil block, against `Ric = 6g`, `R = 42`.

use closed_g2::exterior::DIM;
use closed_g2::fields::{curvature, Chart, TensorField, Valence};

fn main() -> closed_g2::Result<()> {
    let center = [0.1, -0.2, 0.15, 0.05, -0.1, 0.2, 0.0];
    let conformal = |x: &[f64; DIM]| 4.0 / (1.0 + x.iter().map(|v| v * v).sum::<f64>()).powi(2);
    for h in [0.1, 0.05, 0.025] {
        let chart = Chart::centered(5, h, center)?;
        let g = TensorField::sample(&chart, Valence::METRIC, [true; DIM], |x| {
            let s = conformal(x);
            (0..DIM * DIM)
                .map(|c| if c / DIM == c % DIM { s } else { 0.0 })
                .collect()
        })?;
        let cd = curvature(&g)?;
        let ric = cd.ricci.at(&[2; DIM]).expect("center is interior");
        let s0 = conformal(&center);
        let ric_err = (0..DIM * DIM)
            .map(|c| (ric[c] - if c / DIM == c % DIM { 6.0 * s0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        let r = cd.scalar.at(&[2; DIM]).expect("center is interior")[0];
        println!("h = {h:<6} |Ric - 6g| = {ric_err:.3e}  R = {r:.8}");
    }
    Ok(())
}

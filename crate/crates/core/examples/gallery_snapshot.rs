//! Builds the default perturbed closed structure, writes it as a binary
//! snapshot and reads it back.
//!
//!     cargo run --release --example gallery_snapshot -- 12 /tmp/phi.g2f

use closed_g2::fields::{read_snapshot, write_snapshot};
use closed_g2::gallery::{gallery_chart, perturbed_closed, positivity_margin, BetaSpec, DEFAULT_AMPLITUDE};

fn main() -> closed_g2::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|a| a.parse().ok()).unwrap_or(12);
    let path = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("gallery.g2f").display().to_string());
    let beta = BetaSpec::default();
    let phi = perturbed_closed(&gallery_chart(&beta, n)?, &beta, DEFAULT_AMPLITUDE)?;
    write_snapshot(&phi, std::io::BufWriter::new(std::fs::File::create(&path)?))?;
    let back = read_snapshot(std::io::BufReader::new(std::fs::File::open(&path)?))?;
    println!(
        "{path}: {} points, resolution {:?}",
        back.point_count(),
        back.chart().resolution()
    );
    println!("round trip identical: {}", back.values() == phi.values());
    println!("positivity margin {:.6}", positivity_margin(&back)?);
    Ok(())
}

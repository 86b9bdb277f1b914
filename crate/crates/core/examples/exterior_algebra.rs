//! Wedge, interior product and Hodge star on the flat model.

use closed_g2::exterior::{form_inner, hodge_star, interior_basis, volume_form, wedge, MetricData};
use closed_g2::g2::standard_phi;

fn main() -> closed_g2::Result<()> {
    let m = MetricData::euclidean();
    let phi = standard_phi::<f64>();
    let psi = hodge_star(&phi, &m);
    let top = wedge(&phi, &psi)?;
    let vol = volume_form(&m);
    println!(
        "phi ^ *phi = {} vol",
        top.top_coeff().unwrap() / vol.top_coeff().unwrap()
    );
    println!("|phi|^2 = {}", form_inner(&phi, &phi, &m)?);
    println!("** phi == phi: {}", hodge_star(&psi, &m) == phi);
    let i0 = interior_basis(0, &phi)?;
    println!("i_e1 phi = {:?}", i0.coeffs());
    println!("phi ^ phi = 0: {}", wedge(&phi, &phi)?.is_zero());
    Ok(())
}

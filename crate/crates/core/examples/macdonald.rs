//! Macdonald functions of imaginary and real order, with the gamma helpers
//! that appear in closed forms.
//!
//! cargo run --example macdonald

use klortho::specfun::{besselk_imag, besselk_imag_xscaled, besselk_real, gamma_abs_sq, rho_nu};

fn main() -> klortho::Result<()> {
    println!("{:>6} {:>6} {:>24} {:>24}", "tau", "x", "K_itau(x)", "e^(pi tau/2) K_itau(x)");
    for tau in [0.0, 1.0, 5.0, 20.0] {
        for x in [0.1, 1.0, 10.0] {
            let plain = besselk_imag(tau, x, false)?;
            let scaled = besselk_imag(tau, x, true)?;
            println!("{tau:>6} {x:>6} {plain:>24.16e} {scaled:>24.16e}");
        }
    }

    // far out in x the exponentially scaled form keeps its digits
    let x = 150.0;
    println!("\ne^x K_i(x) at x = {x}: {:.16e}", besselk_imag_xscaled(1.0, x)?);

    println!("K_0.5(2) = {:.16e} (sqrt(pi/4) e^-2 = {:.16e})", besselk_real(0.5, 2.0)?, (std::f64::consts::PI / 4.0).sqrt() * (-2f64).exp());
    println!("rho_0.5(1) = {:.16e}", rho_nu(0.5, 1.0)?);
    println!("|Gamma(1 + 2i)|^2 = {:.16e}", gamma_abs_sq(1.0, 2.0)?);
    Ok(())
}

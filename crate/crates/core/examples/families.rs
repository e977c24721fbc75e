//! Polynomial families, generated functions and their transform images in
//! closed form and by quadrature.
//!
//! cargo run --example families

use klortho::families::{askey_poly, generated_function, kl_image_closed, kl_image_integral, laguerre, ClosedForm, FamilySpec, ImageWeight, Side};
use klortho::quad::QuadSpec;

fn main() -> klortho::Result<()> {
    println!("L_3^0.5(x): {:?}", [0.0, 1.0, 4.0].map(|x| laguerre(3, 0.5, x).unwrap()));

    let wilson = FamilySpec::Wilson { a: 1.0, b: 0.5, c: 0.7, d: 1.2 };
    let cdh = FamilySpec::ContinuousDualHahn { a: 1.0, b: 1.0, c: 0.3 };
    for n in 0..4 {
        println!("n = {n}: W_n(0.9) = {:.12e}, S_n(0.9) = {:.12e}", askey_poly(&wilson, n, 0.9)?, askey_poly(&cdh, n, 0.9)?);
    }

    let power = FamilySpec::CdhPower { side: Side::F, a: 1.0, b: 1.0, c: 0.3 };
    let exp = FamilySpec::CdhExp { side: Side::G, a: 1.0, b: 1.0, c: 0.3 };
    println!("generated at x = 1.5: {:.12e}, {:.12e}", generated_function(&power, 2, 1.5)?, generated_function(&exp, 2, 1.5)?);

    // images of x^beta e^{-mu x} L_n^alpha(x) under K_itau(mu x)
    let quad = QuadSpec::default();
    let (alpha, beta, mu) = (1.5, 0.2, 0.5);
    let form = ClosedForm::LaguerreMatched { alpha, beta, mu };
    let weight = ImageWeight::Laguerre { alpha, beta, mu, eta: mu };
    for n in 0..4 {
        let closed = kl_image_closed(&form, n, 1.2)?;
        let integral = kl_image_integral(&weight, n, 1.2, &quad)?;
        println!("image n = {n}: closed {closed:.14e}, integral {integral:.14e}");
    }
    Ok(())
}

//! Forward and inverse Kontorovich-Lebedev transforms, the Parseval identity
//! and the cosine reciprocity.
//!
//! cargo run --example transform

use klortho::kl::{cosine_reciprocity, kl_forward, kl_inverse, parseval_residual, IndexFunction, RealFunction, TransformSpec};
use klortho::quad::{DecayProfile, QuadSpec};
use std::f64::consts::PI;

fn main() -> klortho::Result<()> {
    let quad = QuadSpec::default();
    let spec = TransformSpec::default();
    let f = RealFunction::exp_moment(0.0, 1.0);

    println!("F[e^-x](tau) against pi tau / sinh(pi tau):");
    for tau in [0.25, 1.0, 3.0] {
        let got = kl_forward(&f, tau, &spec, &quad)?;
        let want = if tau == 0.0 { 1.0 } else { PI * tau / (PI * tau).sinh() };
        println!("  tau = {tau:<5} {got:.15e}  diff {:.1e}", got - want);
    }

    // inverting the closed-form image gives e^-x back
    let image = IndexFunction::new(|t: f64| PI * t / (PI * t).sinh(), false, Some(DecayProfile::IndexDecay(0.5 * PI)));
    for x in [0.5, 1.0, 2.0] {
        let back = kl_inverse(&image, x, &spec, &quad)?;
        println!("  inverse at x = {x}: {back:.12e}  (e^-x = {:.12e})", (-x).exp());
    }

    let (lhs, rhs) = parseval_residual(&f, &f, &spec, &quad)?;
    println!("Parseval: {lhs:.15} = {rhs:.15}");

    let (x, u) = (1.0f64, 0.5f64);
    println!("reciprocity: {:.15e} vs {:.15e}", cosine_reciprocity(x, u, &quad)?, (-x * u.cosh()).exp());

    // the hat variant uses K_itau(2 sqrt x)
    let hat = kl_forward(&f, 1.0, &TransformSpec::hat(), &quad)?;
    println!("hat transform of e^-x at tau = 1: {hat:.15e}");
    Ok(())
}

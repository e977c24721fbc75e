//! The index convolution, its factorization under the transform, the kernel
//! identity and bound, and the Young-type norm inequality.
//!
//! cargo run --release --example convolution

use klortho::convolution::{
    convolve, factorization_residual, kernel_bound, kernel_exact, kernel_index_integral, parseval_type_eval, young_bound, ConvolutionKind,
};
use klortho::kl::RealFunction;
use klortho::quad::QuadSpec;
use std::f64::consts::PI;

fn main() -> klortho::Result<()> {
    let quad = QuadSpec::two_dim();
    let f = RealFunction::exp_moment(0.0, 1.0);
    let g = RealFunction::exp_moment(1.0, 2.0);

    for x in [0.5, 1.0, 2.0] {
        let a = convolve(&f, &g, x, ConvolutionKind::Standard, &quad)?;
        let b = parseval_type_eval(&f, &g, x, &quad)?;
        let hat = convolve(&f, &g, x, ConvolutionKind::Hat, &quad)?;
        println!("x = {x}: direct {a:.10e}, through the index integral {b:.10e}, hat {hat:.10e}");
    }

    let (lhs, rhs) = factorization_residual(&f, &g, 1.0, &quad)?;
    println!("F[f*g](1) = {lhs:.10e}, F[f](1) F[g](1) = {rhs:.10e}");

    let (x, y, t) = (1.0, 0.5, 2.0);
    let exact = kernel_exact(x, y, t);
    let by_index = kernel_index_integral(x, y, t, &QuadSpec::default())?;
    println!("kernel {exact:.15e} vs index integral {by_index:.15e}");
    println!("bound at delta = 0.4 pi: {:.6e}", kernel_bound(x, y, t, 0.4 * PI)?);

    let (norm, product) = young_bound(&f, &g, 0.8, &quad)?;
    println!("Young: {norm:.6e} <= {product:.6e}");
    Ok(())
}

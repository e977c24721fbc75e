//! The expression language behind the command line: parse a formula, let it
//! infer decay and origin behaviour, and hand it to the transform. The same
//! commands run in-process through `cli::run`.
//!
//! cargo run --example expressions

use klortho::cli::{self, Expr};
use klortho::kl::{kl_forward, kl_inverse, TransformSpec};
use klortho::quad::QuadSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadSpec::default();
    let f = Expr::parse("x^0.5 * exp(-2*x) * laguerre(2, 0.5, x)", "x")?.real_function()?;
    println!("forward transform at tau = 1: {:.15e}", kl_forward(&f, 1.0, &TransformSpec::default(), &quad)?);

    let image = Expr::parse("exp(-tau^2)", "tau")?.index_function(quad.log_cutoff())?;
    println!("inverse at x = 1: {:.15e}", kl_inverse(&image, 1.0, &TransformSpec::default(), &quad)?);

    for bad in ["exp(-x", "exp(x^2)", "1/(x+1)"] {
        match Expr::parse(bad, "x").and_then(Expr::real_function) {
            Ok(_) => println!("{bad}: accepted"),
            Err(e) => println!("{bad}: {e}"),
        }
    }

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(["klortho", "transform", "--f", "exp(-x)", "--tau", "1"].map(String::from).to_vec(), &mut out, &mut err);
    print!("klortho transform exit {code}: {}", String::from_utf8_lossy(&out));
    Ok(())
}

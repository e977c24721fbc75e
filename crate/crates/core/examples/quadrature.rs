//! The double-exponential integrators on their own: half line with declared
//! decay and origin behaviour, finite intervals, Fourier sine integrals,
//! the quarter plane and index integrals.
//!
//! cargo run --example quadrature

use klortho::quad::{
    try_integrate_2d, try_integrate_finite, try_integrate_semiinf, try_integrate_sine, try_integrate_tau_index, DecayProfile,
    OriginBehavior, QuadSpec,
};
use std::f64::consts::PI;

fn main() -> klortho::Result<()> {
    let spec = QuadSpec::default();

    let r = try_integrate_semiinf(|x: f64| Ok(x.powf(-0.5) * (-x).exp()), DecayProfile::ExpDecay(1.0), OriginBehavior::PowerSingularity(-0.5), &spec)?;
    println!("int x^-1/2 e^-x = {:.16} (sqrt pi = {:.16}), {} evaluations", r.value, PI.sqrt(), r.evaluations);

    let r = try_integrate_semiinf(|x: f64| Ok(x.ln() * (-x * x).exp()), DecayProfile::StretchedExpDecay { rate: 1.0, power: 2.0 }, OriginBehavior::LogSingularity, &spec)?;
    let euler = 0.577_215_664_901_532_9;
    println!("int ln x e^-x^2 = {:.16} ({:.16})", r.require("log integral")?, -PI.sqrt() / 4.0 * (euler + 2.0 * 2f64.ln()));

    let r = try_integrate_finite(|x: f64| Ok((1.0 - x * x).sqrt()), -1.0, 1.0, &spec)?;
    println!("int_-1^1 sqrt(1 - x^2) = {:.16} (pi/2)", r.value);

    let r = try_integrate_sine(|x: f64| Ok(1.0 / x), 1.0, &spec)?;
    println!("int sin x / x = {:.16} (pi/2)", r.value);

    let axis = (DecayProfile::ExpDecay(1.0), OriginBehavior::Bounded);
    let r = try_integrate_2d(|y: f64, t: f64| Ok((-y - 2.0 * t).exp()), [axis, (DecayProfile::ExpDecay(2.0), OriginBehavior::Bounded)], &QuadSpec::two_dim())?;
    println!("int int e^(-y-2t) = {:.12} (1/2)", r.value);

    // tau / sinh(pi tau) integrates to 1/4
    let r = try_integrate_tau_index(|t: f64| Ok(if t == 0.0 { 1.0 / PI } else { t / (PI * t).sinh() }), Some(DecayProfile::IndexDecay(PI)), &spec)?;
    println!("int tau / sinh(pi tau) = {:.16} (converged {})", r.value, r.converged);
    Ok(())
}

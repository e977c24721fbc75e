use super::{QuadResult, QuadSpec};
use crate::error::{Error, Result};
use std::f64::consts::PI;

const BETA: f64 = 0.25;

/// Ooura-Mori double-exponential rule for `∫₀^∞ f(x) sin(ωx) dx`.
///
/// Nodes sit close to the zeros of `sin(ωx)` for large `x`, so `f` only needs
/// to decay (or stay bounded) rather than be absolutely integrable.
pub fn try_integrate_sine<F>(f: F, omega: f64, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!("sine frequency must be positive, got {omega}")));
    }
    let mut h = 0.2;
    let mut prev = f64::NAN;
    let mut err = f64::INFINITY;
    let mut evaluations = 0;
    let mut magnitude = 0.0;
    for level in 0..=spec.max_refinements {
        let (value, evals, mag) = ooura_mori_sum(&f, omega, h)?;
        magnitude = mag;
        evaluations += evals;
        if level > 0 {
            err = (value - prev).abs();
            if level >= 2 && err <= spec.tolerance_for(value) {
                return Ok(QuadResult { value, err_estimate: err, evaluations, converged: true, magnitude });
            }
        }
        prev = value;
        h *= 0.5;
    }
    Ok(QuadResult { value: prev, err_estimate: err, evaluations, converged: false, magnitude })
}

fn ooura_mori_sum<F>(f: &F, omega: f64, h: f64) -> Result<(f64, usize, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = PI / h;
    let alpha = BETA / (1.0 + m * (1.0 + m).ln() / (4.0 * PI)).sqrt();
    // φ(t) = t / (1 - e^{-u(t)}), u = 2t + α(1 - e^{-t}) + β(e^t - 1)
    let phi = |t: f64| -> (f64, f64) {
        let u1 = 2.0 + alpha + BETA;
        if t.abs() < 1e-8 {
            let u2 = BETA - alpha;
            return (1.0 / u1, -(u2 - u1 * u1) / (2.0 * u1 * u1));
        }
        let u = 2.0 * t + alpha * (1.0 - (-t).exp()) + BETA * t.exp_m1();
        let du = 2.0 + alpha * (-t).exp() + BETA * t.exp();
        let em = (-u).exp();
        if em.is_infinite() {
            return (0.0, 0.0);
        }
        let d = -(-u).exp_m1();
        (t / d, (d - t * du * em) / (d * d))
    };
    let term = |n: i64| -> Result<f64> {
        let t = n as f64 * h;
        let (p, dp) = phi(t);
        if p == 0.0 || dp == 0.0 {
            return Ok(0.0);
        }
        let x = m * p / omega;
        let s = if n > 0 {
            // sin(Mφ) with Mφ = nπ + M(φ - t)
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * (m * (p - t)).sin()
        } else {
            (m * p).sin()
        };
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(f(x)? * s * dp)
    };
    let mut sum = term(0)?;
    let mut abs_sum = sum.abs();
    let mut evals = 1;
    for dir in [1i64, -1] {
        let mut quiet = 0;
        let mut n = dir;
        let n_min = (3.0 / h).ceil() as u64;
        while (quiet < 4 || n.unsigned_abs() < n_min) && n.unsigned_abs() < 200_000 {
            let v = term(n)?;
            evals += 1;
            sum += v;
            abs_sum += v.abs();
            if v.abs() <= 1e-17 * sum.abs().max(1e-300) {
                quiet += 1;
            } else {
                quiet = 0;
            }
            n += dir;
        }
    }
    Ok((m / omega * h * sum, evals, m / omega * h * abs_sum))
}

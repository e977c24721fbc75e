use std::f64::consts::PI;

use super::{complex_lngamma, ComplexValue, MAX_ORDER_IMAG, MAX_ORDER_REAL};
use crate::error::{Error, Result};

/// Hard cap on the imaginary order. Index integrals sample a little past the
/// documented box `τ ≤ 40` in their tails.
pub const TAU_HARD_CAP: f64 = 1.5 * MAX_ORDER_IMAG;

/// Below this order the real-line integral loses at most a factor `e^{πτ/2}`.
const SMALL_TAU: f64 = 0.1;
/// The series is used for `x < SERIES_RATIO·τ`; beyond it the contour
/// integral loses fewer digits.
const SERIES_RATIO: f64 = 0.65;
/// Largest contour angle; keeps the integrand decaying along the shifted path.
const MAX_THETA: f64 = PI / 2.0 - 0.3;
/// Log-scale margin below the peak at which integrands are truncated.
const TAIL_LOG: f64 = 50.0;
const MAX_HALVINGS: usize = 14;

/// Order of a Macdonald function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MacdonaldOrder {
    RealOrder(f64),
    /// `K_{iτ}`; stored as `|τ|` since the function is even in `τ`.
    ImaginaryOrder(f64),
}

impl MacdonaldOrder {
    pub fn imaginary(tau: f64) -> Self {
        MacdonaldOrder::ImaginaryOrder(tau.abs())
    }
}

/// `K` of either kind of order.
pub fn besselk(order: MacdonaldOrder, x: f64) -> Result<f64> {
    match order {
        MacdonaldOrder::RealOrder(nu) => besselk_real(nu, x),
        MacdonaldOrder::ImaginaryOrder(tau) => besselk_imag(tau, x, false),
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("Macdonald argument must be positive, got {x}")));
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.abs += v.abs();
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Trapezoid rule over `[0, u_max]` for an even integrand on the real line,
/// halving the step until the sum settles. Returns the integral over `(0, ∞)`.
fn even_trapezoid(f: impl Fn(f64) -> f64, u_max: f64, h_start: f64) -> Result<f64> {
    let mut h = h_start.min(u_max / 4.0).max(u_max * 1e-6);
    let mut n = (u_max / h).ceil() as usize;
    let mut acc = Accumulator::default();
    acc.add(0.5 * f(0.0));
    for j in 1..=n {
        acc.add(f(j as f64 * h));
    }
    let mut prev = h * acc.value();
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        n *= 2;
        for j in 0..n / 2 {
            acc.add(f((2 * j + 1) as f64 * h));
        }
        let cur = h * acc.value();
        let floor = 1e-16 * h * acc.abs;
        if (cur - prev).abs() <= 4e-15 * cur.abs() + floor {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { what: "Macdonald quadrature", value: prev, err: f64::NAN })
}

/// `e^x K_ν(x)` via `∫ exp(-2x sinh²(u/2)) cosh(νu) du`.
pub fn besselk_real_xscaled(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let nu = nu.abs();
    if nu > MAX_ORDER_REAL {
        return Err(Error::Domain(format!("real order {nu} outside [0, {MAX_ORDER_REAL}]")));
    }
    let log_g = |u: f64| nu * u - 2.0 * x * (0.5 * u).sinh().powi(2);
    let u_peak = (nu / x).asinh();
    let peak = log_g(u_peak);
    if peak > 700.0 {
        return Err(Error::Overflow(format!("K_{nu}({x})")));
    }
    // first u past the peak where the log-integrand dropped by TAIL_LOG
    let mut span = 2.0 * (TAIL_LOG / (2.0 * x)).sqrt().asinh();
    while log_g(u_peak + span) > peak - TAIL_LOG {
        span *= 2.0;
    }
    let (mut lo, mut hi) = (u_peak, u_peak + span);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if log_g(mid) > peak - TAIL_LOG {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u_max = hi;
    // integrand scaled by e^{-peak} to stay in range
    let f = |u: f64| (log_g(u) - peak + (-(2.0 * nu * u)).exp().ln_1p() - std::f64::consts::LN_2).exp();
    let width = 1.0 / (x.sqrt() + nu).max(1.0);
    let v = even_trapezoid(f, u_max, 0.5 * width)?;
    let out = v * peak.exp();
    if !out.is_finite() {
        return Err(Error::Overflow(format!("K_{nu}({x})")));
    }
    Ok(out)
}

/// `K_ν(x) = ∫₀^∞ e^{-x cosh u} cosh(νu) du` for real `ν`.
pub fn besselk_real(nu: f64, x: f64) -> Result<f64> {
    Ok(besselk_real_xscaled(nu, x)? * (-x).exp())
}

/// `e^{x + πτ/2} K_{iτ}(x)`, the doubly scaled value every public variant derives from.
fn kimag_doubly_scaled(tau: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let tau = tau.abs();
    if tau > TAU_HARD_CAP {
        return Err(Error::Domain(format!("imaginary order {tau} above {TAU_HARD_CAP}")));
    }
    if tau == 0.0 {
        return besselk_real_xscaled(0.0, x);
    }
    if x < SERIES_RATIO * tau && tau >= SMALL_TAU {
        return kimag_series(tau, x);
    }
    kimag_contour(tau, x)
}

/// Power series of `I_{iτ}`: `K_{iτ}(x) = -π Im I_{iτ}(x) / sinh(πτ)`.
fn kimag_series(tau: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = ComplexValue::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * ComplexValue::new(kf + 1.0, tau));
        sum += term;
        k += 1;
        if term.norm() < 1e-17 * sum.norm() && kf + 1.0 > q.sqrt() {
            break;
        }
        if k > 10_000 {
            return Err(Error::NonConvergence { what: "I_{iτ} series", value: sum.norm(), err: term.norm() });
        }
    }
    let lg = complex_lngamma(ComplexValue::new(1.0, tau))?;
    // (x/2)^{iτ} / Γ(1+iτ) with the modulus folded into the real exponent
    let phase = tau * (0.5 * x).ln() - lg.im;
    let log_mod = -lg.re - 0.5 * PI * tau;
    let unit = ComplexValue::from_polar(1.0, phase);
    let im = (unit * sum).im;
    let factor = 2.0 * PI / (-(-2.0 * PI * tau).exp()).ln_1p().exp();
    Ok(-factor * (log_mod + x).exp() * im)
}

/// Contour-shifted cosine representation.
///
/// Moving `u → v + iθ` gives
/// `K_{iτ}(x) = e^{-τθ} ∫₀^∞ e^{-x cosθ cosh v} cos(τv - x sinθ sinh v) dv`;
/// `sin θ = τ/x` removes the cancellation that the real-line integral
/// suffers when `τ` is large.
fn kimag_contour(tau: f64, x: f64) -> Result<f64> {
    let theta = if tau < SMALL_TAU {
        0.0
    } else if tau < x {
        (tau / x).asin().min(MAX_THETA)
    } else {
        MAX_THETA
    };
    let (st, ct) = theta.sin_cos();
    let s2 = (0.5 * theta).sin().powi(2);
    let lift = 0.5 * PI * tau - tau * theta + 2.0 * x * s2;
    let sh = ((2.0 * x * s2 + TAIL_LOG) / (2.0 * x * ct)).sqrt();
    let v_max = 2.0 * sh.asinh();
    let f = |v: f64| {
        let e = -2.0 * x * ct * (0.5 * v).sinh().powi(2);
        e.exp() * (tau * v - x * st * v.sinh()).cos()
    };
    // phase speed where the envelope has fallen to e^{-36}
    let sh36 = ((2.0 * x * s2 + 36.0) / (2.0 * x * ct)).sqrt();
    let freq = (tau - x * st * (2.0 * sh36.asinh()).cosh()).abs().max(tau);
    let width = 1.0 / (x * ct).sqrt().max(1.0);
    let h = (0.5 * width).min(2.0 * PI / (4.0 * freq)).min(0.25);
    Ok(lift.exp() * even_trapezoid(f, v_max, h)?)
}

/// `K_{iτ}(x)`; with `scaled` the value `e^{πτ/2} K_{iτ}(x)` is returned.
pub fn besselk_imag(tau: f64, x: f64, scaled: bool) -> Result<f64> {
    let s = kimag_doubly_scaled(tau, x)?;
    let shift = if scaled { -x } else { -x - 0.5 * PI * tau.abs() };
    Ok(s * shift.exp())
}

/// `e^{x} K_{iτ}(x)`, for integrands that pair the kernel with `e^{x}`.
pub fn besselk_imag_xscaled(tau: f64, x: f64) -> Result<f64> {
    Ok(kimag_doubly_scaled(tau, x)? * (-0.5 * PI * tau.abs()).exp())
}

/// Scaled Macdonald weight `ρ_ν(x) = 2 x^{ν/2} K_ν(2√x)`.
pub fn rho_nu(nu: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    let z = 2.0 * x.sqrt();
    let log = std::f64::consts::LN_2 + 0.5 * nu * x.ln() - z;
    Ok(besselk_real_xscaled(nu, z)? * log.exp())
}

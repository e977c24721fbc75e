//! The KL convolution
//! `(f∗g)(x) = (2x)^{-1} ∬ exp(-(y²+t²)x/(2yt) - yt/(2x)) f(y) g(t) dy dt`,
//! its hat variant built for `F_{2,1/2}`, and the identities that tie both
//! to products of transforms.

use crate::error::{Error, Result};
use crate::kl::{kl_forward_scaled, tau_weight, weight_q, RealFunction, TransformSpec, WeightVariant};
use crate::quad::{
    try_integrate_2d, try_integrate_finite_gaps, try_integrate_semiinf, try_integrate_tau_index, DecayProfile,
    OriginBehavior, QuadSpec,
};
use crate::specfun::{besselk_imag, besselk_real, besselk_real_xscaled};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionKind {
    /// `(f∗g)`, paired with `F = F_{1,1}`.
    Standard,
    /// `(f∗̂g)(x) = (4x)^{-1} ∬ exp(-(y+t)√(x/(yt)) - √(yt/x)) f(y) g(t) dy dt`,
    /// paired with `F_{2,1/2}`.
    Hat,
}

impl ConvolutionKind {
    pub fn transform(self) -> TransformSpec {
        match self {
            ConvolutionKind::Standard => TransformSpec::default(),
            ConvolutionKind::Hat => TransformSpec::hat(),
        }
    }

    /// Decay of the kernel along either axis; it also bounds the decay of the result in `x`.
    fn kernel_decay(self) -> DecayProfile {
        match self {
            ConvolutionKind::Standard => DecayProfile::ExpDecay(1.0),
            ConvolutionKind::Hat => DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 },
        }
    }

    fn weight_variant(self) -> WeightVariant {
        match self {
            ConvolutionKind::Standard => WeightVariant::Plain,
            ConvolutionKind::Hat => WeightVariant::Hat,
        }
    }
}

/// Convolution kernel divided by nothing: `exp(...)` of either kind.
pub fn kernel(kind: ConvolutionKind, x: f64, y: f64, t: f64) -> f64 {
    match kind {
        ConvolutionKind::Standard => (-0.5 * x * (y / t + t / y) - 0.5 * y * t / x).exp(),
        ConvolutionKind::Hat => (-(y + t) * (x / (y * t)).sqrt() - (y * t / x).sqrt()).exp(),
    }
}

/// Tolerances one nesting level down.
pub fn inner_spec(quad: &QuadSpec) -> QuadSpec {
    QuadSpec {
        abs_tol: quad.abs_tol * 0.1,
        rel_tol: quad.rel_tol * 0.1,
        max_refinements: QuadSpec::two_dim().max_refinements,
        truncation_margin: quad.truncation_margin,
    }
}

/// `(f∗g)(x)` or `(f∗̂g)(x)` by a 2-D rule that uses the same grid on both
/// axes, so that swapping `f` and `g` only changes the summation order.
pub fn convolve(f: &RealFunction, g: &RealFunction, x: f64, kind: ConvolutionKind, quad: &QuadSpec) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("convolution point must be positive, got {x}")));
    }
    let cutoff = quad.log_cutoff();
    let k = kind.kernel_decay();
    let (df, dg) = (f.decay.tighter(k, cutoff), g.decay.tighter(k, cutoff));
    let decay = if df.truncation(cutoff) >= dg.truncation(cutoff) { df } else { dg };
    let origin = f.origin.rougher(g.origin);
    let prefactor = match kind {
        ConvolutionKind::Standard => 0.5 / x,
        ConvolutionKind::Hat => 0.25 / x,
    };
    let integrand = |y: f64, t: f64| {
        let a = f.eval(y);
        if a == 0.0 {
            return Ok(0.0);
        }
        let b = g.eval(t);
        if b == 0.0 {
            return Ok(0.0);
        }
        Ok(kernel(kind, x, y, t) * a * b)
    };
    let r = try_integrate_2d(integrand, [(decay, origin), (decay, origin)], quad)?;
    Ok(prefactor * r.require("convolution")?)
}

/// `∫₀^∞ K_{iτ}(x) (f∗g)(x) dx` by nested quadrature next to `(Ff)(τ)(Fg)(τ)`.
pub fn factorization_residual(f: &RealFunction, g: &RealFunction, tau: f64, quad: &QuadSpec) -> Result<(f64, f64)> {
    let inner = inner_spec(quad);
    let h = |x: f64| Ok(besselk_imag(tau, x, true)? * convolve(f, g, x, ConvolutionKind::Standard, &inner)?);
    let lhs = try_integrate_semiinf(h, DecayProfile::ExpDecay(1.0), OriginBehavior::LogSingularity, quad)?
        .require("transform of a convolution")?;
    let spec = TransformSpec::default();
    let rhs = kl_forward_scaled(f, tau, &spec, &inner)? * kl_forward_scaled(g, tau, &spec, &inner)?;
    let down = (-0.5 * PI * tau).exp();
    Ok((lhs * down, rhs * down * down))
}

/// `(2/(xπ²)) ∫ τ sinh(πτ) K_{iτ}(x) (Ff)(τ) (Fg)(τ) dτ`.
pub fn parseval_type_eval(f: &RealFunction, g: &RealFunction, x: f64, quad: &QuadSpec) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("evaluation point must be positive, got {x}")));
    }
    let spec = TransformSpec::default();
    let inner = inner_spec(quad);
    let h = |tau: f64| {
        let a = kl_forward_scaled(f, tau, &spec, &inner)?;
        if a == 0.0 {
            return Ok(0.0);
        }
        let b = kl_forward_scaled(g, tau, &spec, &inner)?;
        Ok(tau_weight(tau) * (-0.5 * PI * tau).exp() * besselk_imag(tau, x, true)? * (a * b))
    };
    let r = try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?.require("Parseval-type integral")?;
    Ok(2.0 / (x * PI * PI) * r)
}

/// `∫₀^∞ (f∗g)(x) ω(x) dx` (or the hat convolution) by nesting the 2-D
/// convolution rule inside a 1-D rule in `x`.
pub fn weighted_integral(
    f: &RealFunction,
    g: &RealFunction,
    omega: &RealFunction,
    kind: ConvolutionKind,
    quad: &QuadSpec,
) -> Result<f64> {
    let inner = inner_spec(quad);
    let decay = omega.decay.tighter(kind.kernel_decay(), quad.log_cutoff());
    let origin = omega.origin.rougher(OriginBehavior::LogSingularity);
    let h = |x: f64| {
        let w = omega.eval(x);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * convolve(f, g, x, kind, &inner)?)
    };
    try_integrate_semiinf(h, decay, origin, quad)?.require("weighted convolution functional")
}

/// Both sides of `∫ (f∗g) ω dx = c ∫ τ sinh(πτ) (Ff)(Fg) q(τ) dτ`, with
/// `c = 2/π²` for the standard and `1/π²` for the hat convolution.
pub fn weighted_functional(
    f: &RealFunction,
    g: &RealFunction,
    omega: &RealFunction,
    kind: ConvolutionKind,
    quad: &QuadSpec,
) -> Result<(f64, f64)> {
    let inner = inner_spec(quad);
    let lhs = weighted_integral(f, g, omega, kind, quad)?;
    let spec = kind.transform();
    let variant = kind.weight_variant();
    let rh = |tau: f64| {
        let a = kl_forward_scaled(f, tau, &spec, &inner)?;
        if a == 0.0 {
            return Ok(0.0);
        }
        let b = kl_forward_scaled(g, tau, &spec, &inner)?;
        Ok(tau_weight(tau) * (a * b) * weight_q(omega, tau, variant, &inner)?)
    };
    let rhs = try_integrate_tau_index(rh, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?.require("weighted index integral")?;
    Ok((lhs, 2.0 * spec.beta.abs() / (PI * PI) * rhs))
}

/// `∫₀^∞ (f∗̂g)(x) x^c dx`, reduced to a 2-D integral by integrating the
/// kernel against `x^c` in closed form:
/// `∬ f(y) g(t) (yt/(y+t))^c K_{2c}(2√(y+t)) dy dt`.
pub fn hat_power_moment(f: &RealFunction, g: &RealFunction, c: f64, quad: &QuadSpec) -> Result<f64> {
    let nu = 2.0 * c;
    let cutoff = quad.log_cutoff();
    let k = DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 };
    let (df, dg) = (f.decay.tighter(k, cutoff), g.decay.tighter(k, cutoff));
    let decay = if df.truncation(cutoff) >= dg.truncation(cutoff) { df } else { dg };
    let origin = f.origin.rougher(g.origin);
    let integrand = |y: f64, t: f64| {
        let (a, b) = (f.eval(y), g.eval(t));
        if a == 0.0 || b == 0.0 {
            return Ok(0.0);
        }
        let s = y + t;
        let z = 2.0 * s.sqrt();
        let log = c * (y * t / s).ln() - z;
        Ok(a * b * besselk_real_xscaled(nu, z)? * log.exp())
    };
    try_integrate_2d(integrand, [(decay, origin), (decay, origin)], quad)?.require("hat power moment")
}

/// `∫₀^∞ (f∗g)(x) e^x x^c dx` for `0 < c < 1/2`, reduced to
/// `∬ f(y) g(t) (yt/|y-t|)^c K_c(|y-t|) dy dt`. The inner integral is split at
/// the diagonal, where the integrand behaves like `|y-t|^{-2c}`.
pub fn exp_power_moment(f: &RealFunction, g: &RealFunction, c: f64, quad: &QuadSpec) -> Result<f64> {
    if !(c > 0.0 && c < 0.5) {
        return Err(Error::Domain(format!("moment exponent must lie in (0, 1/2), got {c}")));
    }
    let inner = inner_spec(quad);
    // (yt/d)^c K_c(d) with the distance d passed in exactly
    let kernel = move |y: f64, t: f64, d: f64| -> Result<f64> {
        let log = c * (y * t / d).ln() - d;
        Ok(besselk_real_xscaled(c, d)? * log.exp())
    };
    let row = |y: f64| -> Result<f64> {
        let a = f.eval(y);
        if a == 0.0 {
            return Ok(0.0);
        }
        let below = try_integrate_finite_gaps(|t, _, gap| Ok(g.eval(t) * kernel(y, t, gap)?), 0.0, y, &inner)?
            .require("diagonal split, lower part")?;
        let decay = g.decay.tighter(DecayProfile::ExpDecay(1.0), inner.log_cutoff());
        let above = try_integrate_semiinf(
            |s| Ok(g.eval(y + s) * kernel(y, y + s, s)?),
            decay,
            OriginBehavior::PowerSingularity(-2.0 * c),
            &inner,
        )?
        .require("diagonal split, upper part")?;
        Ok(a * (below + above))
    };
    let decay = f.decay.tighter(DecayProfile::ExpDecay(1.0), quad.log_cutoff());
    try_integrate_semiinf(row, decay, f.origin, quad)?.require("exp power moment")
}

/// `(t^{c-1}e^t ∗ t^{d-1}e^{-t})(x) = x^{d-1} ∫₀^∞ K_d(x+y) (x+y)^{-d} e^y y^{c+d-1} dy`.
///
/// The integrand behaves like `y^{c+d-1}` at 0 and `y^{c-3/2}` at infinity,
/// so the value exists exactly when `c < 1/2` and `c + d > 0`.
pub fn conv_exp_weight(c: f64, d: f64, x: f64, quad: &QuadSpec) -> Result<f64> {
    if !(c < 0.5) || !(c + d > 0.0) || !(x > 0.0) {
        return Err(Error::Domain(format!("conv_exp_weight needs c < 1/2, c + d > 0, x > 0; got ({c}, {d}, {x})")));
    }
    let h = |y: f64| -> Result<f64> {
        let s = x + y;
        let log = -x - d * s.ln() + (c + d - 1.0) * y.ln();
        Ok(besselk_real_xscaled(d, s)? * log.exp())
    };
    let r = try_integrate_semiinf(h, DecayProfile::PowerDecay(1.5 - c), OriginBehavior::PowerSingularity(c + d - 1.0), quad)?
        .require("exponential-weight convolution")?;
    Ok(x.powf(d - 1.0) * r)
}

/// `x ↦ x·(t^{c-1}e^t ∗ t^{d-1}e^{-t})(x)`, the weight of the `3F3` relation.
pub fn conv_exp_omega(c: f64, d: f64, quad: QuadSpec) -> RealFunction {
    RealFunction::new(
        move |x| x * conv_exp_weight(c, d, x, &quad).unwrap_or(f64::NAN),
        DecayProfile::ExpDecay(1.0),
        OriginBehavior::PowerSingularity(d.min(0.0)),
    )
}

/// `exp(-(y²+t²)x/(2yt) - yt/(2x))`, the left side of the kernel index identity.
pub fn kernel_exact(x: f64, y: f64, t: f64) -> f64 {
    kernel(ConvolutionKind::Standard, x, y, t)
}

/// `(4/π²) ∫₀^∞ τ sinh(πτ) K_{iτ}(x) K_{iτ}(y) K_{iτ}(t) dτ`.
pub fn kernel_index_integral(x: f64, y: f64, t: f64, quad: &QuadSpec) -> Result<f64> {
    let h = |tau: f64| {
        let k = besselk_imag(tau, x, true)? * besselk_imag(tau, y, true)? * besselk_imag(tau, t, true)?;
        Ok(tau_weight(tau) * (-0.5 * PI * tau).exp() * k)
    };
    let r = try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?.require("kernel index integral")?;
    Ok(4.0 / (PI * PI) * r)
}

/// `24δ/(π(9δ²-π²)) K₀(x cos δ) K₀(y cos δ) K₀(t cos δ)` for `π/3 < δ < π/2`.
pub fn kernel_bound(x: f64, y: f64, t: f64, delta: f64) -> Result<f64> {
    if !(delta > PI / 3.0 && delta < PI / 2.0) {
        return Err(Error::Domain(format!("kernel bound needs π/3 < δ < π/2, got {delta}")));
    }
    let c = delta.cos();
    let k = besselk_real(0.0, x * c)? * besselk_real(0.0, y * c)? * besselk_real(0.0, t * c)?;
    Ok(24.0 * delta / (PI * (9.0 * delta * delta - PI * PI)) * k)
}

/// `‖h‖ = ∫₀^∞ K₀(p x) |h(x)| dx`.
pub fn k0_norm(h: &RealFunction, p: f64, quad: &QuadSpec) -> Result<f64> {
    let decay = h.decay.tighter(DecayProfile::ExpDecay(p), quad.log_cutoff());
    let origin = h.origin.rougher(OriginBehavior::LogSingularity);
    try_integrate_semiinf(|x| Ok(besselk_real(0.0, p * x)? * h.eval(x).abs()), decay, origin, quad)?.require("K0 norm")
}

/// `(‖f∗g‖_{p²}, ‖f‖_p ‖g‖_p)`; the first never exceeds the second.
pub fn young_bound(f: &RealFunction, g: &RealFunction, p: f64, quad: &QuadSpec) -> Result<(f64, f64)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("Young bound needs 0 < p ≤ 1, got {p}")));
    }
    let inner = inner_spec(quad);
    let h = |x: f64| Ok(besselk_real(0.0, p * p * x)? * convolve(f, g, x, ConvolutionKind::Standard, &inner)?.abs());
    let lhs = try_integrate_semiinf(h, DecayProfile::ExpDecay(1.0), OriginBehavior::LogSingularity, quad)?
        .require("norm of a convolution")?;
    Ok((lhs, k0_norm(f, p, quad)? * k0_norm(g, p, quad)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> RealFunction {
        RealFunction::exp_moment(0.0, 1.0)
    }

    fn q2() -> QuadSpec {
        QuadSpec::two_dim()
    }

    #[test]
    fn zero_inputs() {
        let z = RealFunction::zero();
        assert_eq!(convolve(&z, &z, 1.0, ConvolutionKind::Standard, &q2()).unwrap(), 0.0);
        assert_eq!(parseval_type_eval(&z, &e(), 1.0, &QuadSpec::default()).unwrap(), 0.0);
    }

    #[test]
    fn commutativity() {
        let g = RealFunction::exp_moment(1.0, 1.0);
        for kind in [ConvolutionKind::Standard, ConvolutionKind::Hat] {
            let a = convolve(&e(), &g, 1.0, kind, &q2()).unwrap();
            let b = convolve(&g, &e(), 1.0, kind, &q2()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{kind:?}: {a} vs {b}");
        }
    }

    #[test]
    fn convolution_matches_index_representation() {
        for x in [1.0, 2.0] {
            let direct = convolve(&e(), &e(), x, ConvolutionKind::Standard, &q2()).unwrap();
            let index = parseval_type_eval(&e(), &e(), x, &QuadSpec::with_tolerances(1e-12, 1e-8)).unwrap();
            assert!((direct - index).abs() < 1e-6 * index.abs(), "x={x}: {direct} vs {index}");
        }
    }

    #[test]
    fn kernel_identity_and_bound() {
        for (x, y, t) in [(1.0, 1.0, 1.0), (0.5, 1.0, 2.0)] {
            let lhs = kernel_exact(x, y, t);
            let rhs = kernel_index_integral(x, y, t, &QuadSpec::default()).unwrap();
            assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
            for delta in [0.35 * PI, 0.45 * PI] {
                assert!(lhs <= kernel_bound(x, y, t, delta).unwrap());
            }
        }
        assert!(kernel_bound(1.0, 1.0, 1.0, 0.3).is_err());
    }

    #[test]
    fn laplace_type_reduction() {
        // ∫ x^{-1/2} e^{-x-1/x} dx = 2 K_{1/2}(2) = √π e^{-2}
        let r = try_integrate_semiinf(
            |x: f64| Ok(x.powf(-0.5) * (-x - 1.0 / x).exp()),
            DecayProfile::ExpDecay(1.0),
            OriginBehavior::Bounded,
            &QuadSpec::default(),
        )
        .unwrap()
        .value;
        let k = besselk_real(0.5, 2.0).unwrap();
        assert!((r - 2.0 * k).abs() < 1e-12 && (r - PI.sqrt() * (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn exp_weight_window() {
        let q = QuadSpec::default();
        assert!(conv_exp_weight(0.5, 0.6, 1.0, &q).is_err());
        assert!(conv_exp_weight(0.3, -0.4, 1.0, &q).is_err());
        // d = 1/2: K_{1/2}(s) = √(π/(2s)) e^{-s}, leaving √(π/2) e^{-1} ∫ y^{-0.2}/(1+y) dy
        let v = conv_exp_weight(0.3, 0.5, 1.0, &q).unwrap();
        let want = (PI / 2.0).sqrt() * (-1.0f64).exp() * PI / (0.8 * PI).sin();
        assert!((v - want).abs() < 1e-9 * want, "{v} vs {want}");
    }

    #[test]
    fn exp_weight_against_split_two_dimensional_oracle() {
        // (t^{c-1}e^t ∗ t^{d-1}e^{-t})(x) with the y-integral done numerically
        // for each t and the t-integral split at the ridge t = x
        let (c, d, x) = (0.3f64, 0.6f64, 1.0f64);
        let q = QuadSpec::with_tolerances(1e-12, 1e-9);
        let inner = |t: f64, gap: f64| -> Result<f64> {
            let a = gap * gap / (2.0 * x * t);
            let b = x * t / 2.0;
            let r = try_integrate_semiinf(
                |y: f64| Ok(y.powf(c - 1.0) * (-a * y - b / y).exp()),
                DecayProfile::ExpDecay(a),
                OriginBehavior::Bounded,
                &q,
            )?;
            Ok(r.value * t.powf(d - 1.0) * (-t).exp())
        };
        let lo = try_integrate_finite_gaps(|t, _, gap| inner(t, gap), 0.0, x, &q).unwrap().value;
        let hi = try_integrate_semiinf(|s| inner(x + s, s), DecayProfile::ExpDecay(1.0), OriginBehavior::PowerSingularity(-2.0 * c), &q)
            .unwrap()
            .value;
        let oracle = (lo + hi) / (2.0 * x);
        let v = conv_exp_weight(c, d, x, &QuadSpec::default()).unwrap();
        assert!((v - oracle).abs() < 1e-6 * v, "{v} vs {oracle}");
    }

    #[test]
    fn exp_weight_matches_tricomi_closed_form() {
        // x^{d-1}√π 2^{-c} Γ(c+d)Γ(½-c)/Γ(d+½) e^{-x} U(½-c, 1+d-c, 2x), evaluated in mpmath
        let cases = [
            (0.3, 0.6, 1.0, 2.3972774114342046),
            (-0.5, 1.2, 0.4, 4.29153024702437),
            (0.1, 0.25, 3.5, 0.040769187418164879),
            (0.45, -0.2, 2.0, 1.6704280473016691),
        ];
        for (c, d, x, want) in cases {
            let v = conv_exp_weight(c, d, x, &QuadSpec::default()).unwrap();
            assert!((v - want).abs() < 1e-10 * want, "({c},{d},{x}): {v} vs {want}");
        }
    }
}

use super::{IndexFunction, RealFunction, TransformSpec};
use crate::error::{Error, Result};
use crate::quad::{try_integrate_semiinf, try_integrate_tau_index, DecayProfile, OriginBehavior, QuadSpec};
use crate::specfun::besselk_imag;
use std::f64::consts::PI;

/// `τ sinh(πτ) e^{-πτ}`, the inversion weight with its growth removed.
pub fn tau_weight(tau: f64) -> f64 {
    -0.5 * tau * (-2.0 * PI * tau).exp_m1()
}

/// `e^{πτ/2} (F_{α,β} f)(τ)`.
pub fn kl_forward_scaled(f: &RealFunction, tau: f64, spec: &TransformSpec, quad: &QuadSpec) -> Result<f64> {
    spec.validate()?;
    if cfg!(debug_assertions) && f.decay != DecayProfile::NoDecay {
        f.check_declaration()?;
    }
    let cutoff = quad.log_cutoff();
    let (decay, origin) = match spec.kernel_decay() {
        Some(k) => (f.decay.tighter(k, cutoff), f.origin.rougher(OriginBehavior::LogSingularity)),
        None => (f.decay, f.origin),
    };
    let integrand = |x: f64| -> Result<f64> {
        let v = f.eval(x);
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(besselk_imag(tau, spec.argument(x), true)? * v)
    };
    try_integrate_semiinf(integrand, decay, origin, quad)?.require_to_rounding("KL transform")
}

/// `(F_{α,β} f)(τ) = ∫₀^∞ K_{iτ}(α x^β) f(x) dx`.
///
/// ```
/// use klortho::kl::{kl_forward, RealFunction, TransformSpec};
/// use klortho::quad::QuadSpec;
/// let f = RealFunction::exp_moment(0.0, 1.0);
/// let v = kl_forward(&f, 1.0, &TransformSpec::default(), &QuadSpec::default()).unwrap();
/// let pi = std::f64::consts::PI;
/// assert!((v - pi / pi.sinh()).abs() < 1e-10);
/// ```
pub fn kl_forward(f: &RealFunction, tau: f64, spec: &TransformSpec, quad: &QuadSpec) -> Result<f64> {
    Ok(kl_forward_scaled(f, tau, spec, quad)? * (-0.5 * PI * tau.abs()).exp())
}

/// `f(x) = 2|β|/(π² x) ∫₀^∞ τ sinh(πτ) K_{iτ}(α x^β) F(τ) dτ`.
pub fn kl_inverse(big_f: &IndexFunction, x: f64, spec: &TransformSpec, quad: &QuadSpec) -> Result<f64> {
    spec.validate()?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("inversion point must be positive, got {x}")));
    }
    let decay = big_f.decay.ok_or_else(|| Error::MissingDecay("inversion integrand".into()))?;
    let z = spec.argument(x);
    let h = |tau: f64| -> Result<f64> {
        let v = big_f.eval(tau);
        if v == 0.0 {
            return Ok(0.0);
        }
        let k = besselk_imag(tau, z, true)?;
        let lift = if big_f.scaled { 1.0 } else { (0.5 * PI * tau).exp() };
        Ok(tau_weight(tau) * k * v * lift)
    };
    let r = try_integrate_tau_index(h, Some(decay), quad)?.require("KL inversion")?;
    Ok(2.0 * spec.beta.abs() / (PI * PI * x) * r)
}

/// Both sides of `∫ f g x dx = 2|β|/π² ∫ τ sinh(πτ) (Ff)(Fg) dτ`.
pub fn parseval_residual(f: &RealFunction, g: &RealFunction, spec: &TransformSpec, quad: &QuadSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    let cutoff = quad.log_cutoff();
    let decay = f.decay.tighter(g.decay, cutoff);
    let origin = f.origin.rougher(g.origin);
    let lhs = try_integrate_semiinf(|x| Ok(f.eval(x) * g.eval(x) * x), decay, origin, quad)?.require("Parseval x-side")?;
    let h = |tau: f64| -> Result<f64> {
        let a = kl_forward_scaled(f, tau, spec, quad)?;
        let b = kl_forward_scaled(g, tau, spec, quad)?;
        Ok(tau_weight(tau) * (a * b))
    };
    let rhs = try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?.require("Parseval index side")?;
    Ok((lhs, 2.0 * spec.beta.abs() / (PI * PI) * rhs))
}

/// `(2/π) ∫₀^∞ K_{iτ}(x) cos(τu) dτ`, which reproduces `e^{-x cosh u}`.
pub fn cosine_reciprocity(x: f64, u: f64, quad: &QuadSpec) -> Result<f64> {
    let h = |tau: f64| Ok(besselk_imag(tau, x, false)? * (tau * u).cos());
    let r = try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?.require("cosine reciprocity")?;
    Ok(2.0 / PI * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::OriginBehavior;

    fn q() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn exponential_image() {
        let f = RealFunction::exp_moment(0.0, 1.0);
        for tau in [0.0, 0.5, 1.0, 3.0, 10.0, 30.0] {
            let want = if tau == 0.0 { 1.0 } else { PI * tau / (PI * tau).sinh() };
            let got = kl_forward(&f, tau, &TransformSpec::default(), &q()).unwrap();
            // the x-integral cancels down to e^{-πτ/2} scale; accuracy is absolute there
            assert!((got - want).abs() <= 1e-10 * (-0.5 * PI * tau).exp(), "τ={tau}: {got} vs {want}");
        }
    }

    #[test]
    fn modified_transform_of_power() {
        // ∫ K_{iτ}(2√x) x^{s-1} dx = |Γ(s+iτ/2)|²/2, here s = 1, τ = 0
        let one = RealFunction::new(|x: f64| x.powi(0), DecayProfile::NoDecay, OriginBehavior::Bounded);
        // f = 1 does not decay by itself; the kernel supplies the decay
        let v = kl_forward(&one, 0.0, &TransformSpec::hat(), &q());
        assert!((v.unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn cosine_pair() {
        for x in [0.5f64, 1.0, 2.0] {
            for u in [0.0f64, 0.5, 1.0, 2.0] {
                let got = cosine_reciprocity(x, u, &q()).unwrap();
                assert!((got - (-x * u.cosh()).exp()).abs() < 1e-9, "x={x} u={u}: {got}");
            }
        }
    }

    #[test]
    fn zero_function() {
        let v = kl_forward(&RealFunction::zero(), 2.0, &TransformSpec::default(), &q()).unwrap();
        assert_eq!(v, 0.0);
        let zero = IndexFunction::new(|_| 0.0, false, Some(DecayProfile::IndexDecay(1.0)));
        assert_eq!(kl_inverse(&zero, 1.0, &TransformSpec::default(), &q()).unwrap(), 0.0);
    }

    #[test]
    fn inversion_round_trip() {
        // e^{πτ/2}·πτ/sinh(πτ) = 2πτ e^{-πτ/2}/(1-e^{-2πτ})
        let big_f = IndexFunction::new(
            |t: f64| if t == 0.0 { 1.0 } else { 2.0 * PI * t * (-0.5 * PI * t).exp() / -(-2.0 * PI * t).exp_m1() },
            true,
            Some(DecayProfile::IndexDecay(0.5 * PI)),
        );
        for x in [0.5f64, 1.0, 2.0] {
            let got = kl_inverse(&big_f, x, &TransformSpec::default(), &q()).unwrap();
            assert!((got - (-x).exp()).abs() < 1e-8 * (-x).exp(), "x={x}: {got}");
        }
        let undeclared = IndexFunction::new(|_| 1.0, false, None);
        assert!(matches!(kl_inverse(&undeclared, 1.0, &TransformSpec::default(), &q()), Err(Error::MissingDecay(_))));
    }

    #[test]
    fn parseval_pairs() {
        let f = RealFunction::exp_moment(0.0, 1.0);
        let (l, r) = parseval_residual(&f, &f, &TransformSpec::default(), &q()).unwrap();
        assert!((l - 0.25).abs() < 1e-12 && (r - 0.25).abs() < 1e-9, "{l} {r}");
        let g = RealFunction::exp_moment(1.0, 1.0);
        let (l, r) = parseval_residual(&f, &g, &TransformSpec::default(), &q()).unwrap();
        // ∫ x² e^{-2x} dx = Γ(3)/2³
        assert!((l - 0.25).abs() < 1e-12 && (r - 0.25).abs() < 1e-7, "{l} {r}");
        let (l2, r2) = parseval_residual(&g, &f, &TransformSpec::default(), &q()).unwrap();
        assert_eq!((l, r), (l2, r2));
        let (l, r) = parseval_residual(&f, &RealFunction::zero(), &TransformSpec::default(), &q()).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
    }
}

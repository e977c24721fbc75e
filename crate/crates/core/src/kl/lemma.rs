use super::{kl_forward, RealFunction, TransformSpec};
use crate::error::{Error, Result};
use crate::quad::{try_integrate_semiinf, try_integrate_sine, DecayProfile, OriginBehavior, QuadSpec};
use std::f64::consts::PI;

/// Composed representations of `(F[f/x])(τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma1Form {
    /// `∫₀^∞ cos(τu) ∫₀^∞ e^{-x cosh u} f(x) dx/x du`.
    CosineLaplace,
    /// `τ^{-1} ∫₀^∞ sin(τu) sinh(u) ∫₀^∞ e^{-x cosh u} f(x) dx du`.
    SineForm,
}

/// Ways of computing the weight `q(τ)` of a convolution functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightVariant {
    /// `∫ K_{iτ}(x) ω(x) dx/x`.
    Plain,
    /// `sinh(πτ/2)^{-1} ∫₀^∞ sin(τu) φ(sinh u) du`, `φ(v) = ∫ sin(xv) ω(x) dx/x`.
    SineForm,
    /// `∫ K_{iτ}(2√x) ω(x) dx/x`, for the hat convolution.
    Hat,
}

fn origin_exponent(f: &RealFunction) -> Result<f64> {
    match f.origin {
        OriginBehavior::PowerSingularity(e) if e > 0.0 => Ok(e),
        _ => Err(Error::Domain("composed forms need f(x) = O(x^e) at the origin with e > 0".into())),
    }
}

/// `∫₀^∞ e^{-x cosh u} f(x) x^{p} dx`, to an absolute accuracy scaled by
/// `1/amplify` for callers that multiply the result by `amplify`.
fn laplace_at(f: &RealFunction, u: f64, p: f64, amplify: f64, quad: &QuadSpec) -> Result<f64> {
    let quad = &QuadSpec { abs_tol: (quad.abs_tol / amplify.max(1.0)).max(1e-290), ..*quad };
    let c = u.cosh();
    let g = f.times_power(p);
    let decay = g.decay.tighter(DecayProfile::ExpDecay(c), quad.log_cutoff());
    try_integrate_semiinf(|x| Ok((-x * c).exp() * g.eval(x)), decay, g.origin, quad)?.require("Laplace transform")
}

/// `(F[f/x])(τ)` through the cosine/Laplace or the sine composition.
pub fn lemma1_forms(f: &RealFunction, tau: f64, form: Lemma1Form, quad: &QuadSpec) -> Result<f64> {
    let rate = origin_exponent(f)?;
    let outer = DecayProfile::ExpDecay(rate);
    match form {
        Lemma1Form::CosineLaplace => {
            let h = |u: f64| Ok((tau * u).cos() * laplace_at(f, u, -1.0, 1.0, quad)?);
            try_integrate_semiinf(h, outer, OriginBehavior::Bounded, quad)?.require("cosine-Laplace form")
        }
        Lemma1Form::SineForm => {
            if tau == 0.0 {
                return Err(Error::Domain("sine form is undefined at τ = 0".into()));
            }
            let h = |u: f64| Ok((tau * u).sin() * u.sinh() * laplace_at(f, u, 0.0, u.sinh(), quad)?);
            let r = try_integrate_semiinf(h, outer, OriginBehavior::Bounded, quad)?.require("sine form")?;
            Ok(r / tau)
        }
    }
}

/// `sinh(u) ∫₀^∞ e^{-x cosh u} f(x) dx`, whose decay in `u` the sine form needs.
pub fn sine_form_envelope(f: &RealFunction, u: f64, quad: &QuadSpec) -> Result<f64> {
    Ok(u.sinh() * laplace_at(f, u, 0.0, u.sinh(), quad)?)
}

/// `φ(v) = ∫₀^∞ sin(xv) ω(x) dx/x`.
fn sine_transform(w: &RealFunction, v: f64, quad: &QuadSpec) -> Result<f64> {
    if v == 0.0 {
        return Ok(0.0);
    }
    let g = w.times_power(-1.0);
    if v <= 1.0 {
        let r = try_integrate_semiinf(|x| Ok((x * v).sin() * g.eval(x)), g.decay, g.origin, quad)?;
        return r.require("sine transform");
    }
    try_integrate_sine(|x| Ok(g.eval(x)), v, quad)?.require("sine transform")
}

/// The weight `q(τ)` attached to `ω`.
pub fn weight_q(omega: &RealFunction, tau: f64, variant: WeightVariant, quad: &QuadSpec) -> Result<f64> {
    match variant {
        WeightVariant::Plain => kl_forward(&omega.times_power(-1.0), tau, &TransformSpec::default(), quad),
        WeightVariant::Hat => kl_forward(&omega.times_power(-1.0), tau, &TransformSpec::hat(), quad),
        WeightVariant::SineForm => {
            if tau == 0.0 {
                return Err(Error::Domain("sine form of q is undefined at τ = 0".into()));
            }
            let h = |u: f64| Ok((tau * u).sin() * sine_transform(omega, u.sinh(), quad)?);
            let r = try_integrate_semiinf(h, DecayProfile::ExpDecay(1.0), OriginBehavior::Bounded, quad)?
                .require("sine form of q")?;
            Ok(r / (0.5 * PI * tau).sinh())
        }
    }
}

/// Values of `q` on a grid and the points where it dips below zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
    pub min: f64,
    pub tolerance: f64,
    pub negatives: Vec<f64>,
}

pub fn lemma2_positivity_scan(omega: &RealFunction, taus: &[f64], quad: &QuadSpec) -> Result<PositivityReport> {
    let values = taus
        .iter()
        .map(|&t| weight_q(omega, t, WeightVariant::Plain, quad))
        .collect::<Result<Vec<_>>>()?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = quad.tolerance_for(scale);
    let negatives = taus.iter().zip(&values).filter(|(_, &v)| v < -tolerance).map(|(&t, _)| t).collect();
    Ok(PositivityReport { taus: taus.to_vec(), values, min, tolerance, negatives })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadSpec {
        QuadSpec::default()
    }

    fn x_exp() -> RealFunction {
        RealFunction::exp_moment(1.0, 1.0)
    }

    #[test]
    fn composed_forms_match_transform() {
        for tau in [0.5, 1.0, 2.0] {
            let want = PI * tau / (PI * tau).sinh();
            let a = lemma1_forms(&x_exp(), tau, Lemma1Form::CosineLaplace, &q()).unwrap();
            let b = lemma1_forms(&x_exp(), tau, Lemma1Form::SineForm, &q()).unwrap();
            assert!((a - want).abs() < 1e-9, "τ={tau}: {a} vs {want}");
            assert!((b - want).abs() < 1e-9, "τ={tau}: {b} vs {want}");
        }
        assert!(lemma1_forms(&x_exp(), 0.0, Lemma1Form::SineForm, &q()).is_err());
        assert!(lemma1_forms(&RealFunction::exp_moment(0.0, 1.0), 1.0, Lemma1Form::CosineLaplace, &q()).is_err());
    }

    #[test]
    fn envelope_decays() {
        let u: f64 = 10.0;
        let e = sine_form_envelope(&x_exp(), u, &q()).unwrap();
        let want = u.sinh() / (1.0 + u.cosh()).powi(2);
        assert!((e - want).abs() < 1e-10 * want);
        assert!(e < 1e-3);
    }

    #[test]
    fn weight_variants() {
        let want = PI / PI.sinh();
        let plain = weight_q(&x_exp(), 1.0, WeightVariant::Plain, &q()).unwrap();
        assert!((plain - want).abs() < 1e-10);
        let tau = 0.7;
        let a = weight_q(&x_exp(), tau, WeightVariant::Plain, &q()).unwrap();
        let b = weight_q(&x_exp(), tau, WeightVariant::SineForm, &q()).unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        assert_eq!(weight_q(&RealFunction::zero(), 1.0, WeightVariant::Plain, &q()).unwrap(), 0.0);
    }

    #[test]
    fn positivity_scan() {
        let r = lemma2_positivity_scan(&x_exp(), &[0.5, 1.0, 2.0, 5.0], &q()).unwrap();
        assert!(r.negatives.is_empty() && r.min > 0.0);
        for (t, v) in r.taus.iter().zip(&r.values) {
            assert!((v - PI * t / (PI * t).sinh()).abs() < 1e-9);
        }
        let z = lemma2_positivity_scan(&RealFunction::zero(), &[1.0, 2.0], &q()).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
    }
}

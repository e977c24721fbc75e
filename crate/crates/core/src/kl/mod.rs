//! The Kontorovich-Lebedev transform
//! `(F_{α,β} f)(τ) = ∫₀^∞ K_{iτ}(α x^β) f(x) dx`, its inversion, the Parseval
//! identity, the composed cosine/Laplace representations of `Ff` and the
//! weight `q(τ)` attached to a convolution functional.
//!
//! Index-space integrals are built from `e^{πτ/2} K_{iτ}` with the matching
//! exponentials folded into the `sinh(πτ)` weight, so nothing overflows for
//! `τ` up to 40.

mod lemma;
mod transform;

pub use lemma::{lemma1_forms, lemma2_positivity_scan, sine_form_envelope, weight_q, Lemma1Form, PositivityReport, WeightVariant};
pub use transform::{cosine_reciprocity, kl_forward, kl_forward_scaled, kl_inverse, parseval_residual, tau_weight};

use crate::error::{Error, Result};
use crate::quad::{DecayProfile, OriginBehavior};
use std::fmt;
use std::sync::Arc;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on `(0, ∞)` together with the decay and origin behaviour that
/// the quadrature engines rely on.
#[derive(Clone)]
pub struct RealFunction {
    eval: Eval,
    pub decay: DecayProfile,
    pub origin: OriginBehavior,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction").field("decay", &self.decay).field("origin", &self.origin).finish()
    }
}

impl RealFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, decay: DecayProfile, origin: OriginBehavior) -> Self {
        RealFunction { eval: Arc::new(f), decay, origin }
    }

    /// `x ↦ x^k e^{-rate·x}`.
    pub fn exp_moment(k: f64, rate: f64) -> Self {
        let origin = if k == 0.0 { OriginBehavior::Bounded } else { OriginBehavior::PowerSingularity(k) };
        Self::new(move |x: f64| x.powf(k) * (-rate * x).exp(), DecayProfile::ExpDecay(rate), origin)
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, DecayProfile::ExpDecay(1.0), OriginBehavior::Bounded)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Pointwise product; metadata takes the faster decay and rougher origin.
    pub fn times(&self, other: &RealFunction, cutoff: f64) -> RealFunction {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        RealFunction {
            eval: Arc::new(move |x| a(x) * b(x)),
            decay: self.decay.tighter(other.decay, cutoff),
            origin: self.origin.rougher(other.origin),
        }
    }

    /// `x ↦ x^p f(x)` with the origin exponent shifted accordingly.
    pub fn times_power(&self, p: f64) -> RealFunction {
        let a = self.eval.clone();
        let origin = match self.origin {
            OriginBehavior::PowerSingularity(e) => OriginBehavior::PowerSingularity(e + p),
            OriginBehavior::Bounded if p >= 0.0 => OriginBehavior::PowerSingularity(p),
            other => {
                if p >= 0.0 {
                    other
                } else {
                    OriginBehavior::PowerSingularity(p)
                }
            }
        };
        RealFunction { eval: Arc::new(move |x| x.powf(p) * a(x)), decay: self.decay, origin }
    }

    /// Spot check that the declared decay is not grossly wrong: far past the
    /// truncation point the function must be negligible next to its bulk.
    pub fn check_declaration(&self) -> Result<()> {
        self.decay.validate()?;
        let far = self.decay.truncation(60.0);
        let bulk = [0.1, 0.5, 1.0, 2.0, 5.0]
            .iter()
            .map(|&s| self.eval(s * self.decay.truncation(1.0).max(1e-3)).abs())
            .fold(0.0, f64::max);
        let tail = self.eval(far).abs();
        if tail.is_finite() && tail <= 1e-6 * bulk.max(1e-300) + 1e-300 {
            Ok(())
        } else {
            Err(Error::Domain(format!("declared decay {:?} violated: |f({far:e})| = {tail:e}", self.decay)))
        }
    }
}

/// A function of the index `τ` with the decay of the inversion integrand declared.
#[derive(Clone)]
pub struct IndexFunction {
    eval: Eval,
    /// Values are `e^{πτ/2} F(τ)` rather than `F(τ)`.
    pub scaled: bool,
    /// Decay of `τ sinh(πτ) K_{iτ}(x) F(τ)`; required by the inversion.
    pub decay: Option<DecayProfile>,
}

impl fmt::Debug for IndexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexFunction").field("scaled", &self.scaled).field("decay", &self.decay).finish()
    }
}

impl IndexFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, scaled: bool, decay: Option<DecayProfile>) -> Self {
        IndexFunction { eval: Arc::new(f), scaled, decay }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        (self.eval)(tau)
    }
}

/// Parameters `(α, β)` of `F_{α,β}`; `(1, 1)` is the classical transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for TransformSpec {
    fn default() -> Self {
        TransformSpec { alpha: 1.0, beta: 1.0 }
    }
}

impl TransformSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let s = TransformSpec { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    /// The `(2, 1/2)` transform paired with the hat convolution.
    pub fn hat() -> Self {
        TransformSpec { alpha: 2.0, beta: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || self.beta == 0.0 || !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::Domain(format!("transform needs α > 0, β ≠ 0; got ({}, {})", self.alpha, self.beta)));
        }
        Ok(())
    }

    /// Kernel argument `α x^β`.
    pub fn argument(&self, x: f64) -> f64 {
        self.alpha * x.powf(self.beta)
    }

    /// Decay of the kernel `K_{iτ}(α x^β)` at infinity, when it decays.
    pub fn kernel_decay(&self) -> Option<DecayProfile> {
        if self.beta <= 0.0 {
            None
        } else if self.beta == 1.0 {
            Some(DecayProfile::ExpDecay(self.alpha))
        } else {
            Some(DecayProfile::StretchedExpDecay { rate: self.alpha, power: self.beta })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_spec_validation() {
        assert!(TransformSpec::new(1.0, 1.0).is_ok());
        assert!(TransformSpec::new(0.0, 1.0).is_err());
        assert!(TransformSpec::new(1.0, 0.0).is_err());
        assert_eq!(TransformSpec::hat().argument(4.0), 4.0);
    }

    #[test]
    fn declaration_spot_check() {
        assert!(RealFunction::exp_moment(2.0, 1.0).check_declaration().is_ok());
        let wrong = RealFunction::new(|x: f64| (-0.01 * x).exp(), DecayProfile::ExpDecay(5.0), OriginBehavior::Bounded);
        assert!(wrong.check_declaration().is_err());
    }

    #[test]
    fn products_combine_metadata() {
        let f = RealFunction::exp_moment(1.0, 1.0);
        let g = RealFunction::exp_moment(0.0, 3.0);
        let h = f.times(&g, 40.0);
        assert_eq!(h.decay, DecayProfile::ExpDecay(3.0));
        assert_eq!(h.eval(2.0), f.eval(2.0) * g.eval(2.0));
        assert_eq!(f.times_power(-1.0).origin, OriginBehavior::PowerSingularity(0.0));
    }
}

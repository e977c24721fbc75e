use super::{check_degree, laguerre, pair_pochhammer, terminating_sum, CoefficientTable};
use crate::error::{Error, Result};
use crate::kl::{kl_forward, RealFunction, TransformSpec};
use crate::quad::{DecayProfile, OriginBehavior, QuadSpec};
use crate::specfun::{
    complex_gamma, gamma_abs_sq, hyp_series, ln_gamma_abs_sq, ln_gamma_real, pochhammer_real, rho_nu, besselk_real,
    ComplexValue, HypSeriesSpec,
};
use std::f64::consts::PI;
use std::sync::Arc;

/// Functions whose KL-type transform is taken by quadrature in [`kl_image_integral`].
#[derive(Debug, Clone, PartialEq)]
pub enum ImageWeight {
    /// `∫ x^β e^{-μx} L_n^α(x) K_{iτ}(ηx) dx`.
    Laguerre { alpha: f64, beta: f64, mu: f64, eta: f64 },
    /// `∫ x^β e^{-μx} L_n^α(x) K_{iτ}(η√x) dx`.
    LaguerreSqrt { alpha: f64, beta: f64, mu: f64, eta: f64 },
    /// `F_{2,1/2}(Q_n(x) e^{-x} x^{ν/2-1})` with `Q_n` from the table.
    QExp { nu: f64, coeffs: Arc<CoefficientTable> },
    /// `F_{2,1/2}(Q_n(x) K_ν(2√x))`.
    QBessel { nu: f64, coeffs: Arc<CoefficientTable> },
    /// `F_{2,1/2}(q_n(x) e^{-1/x} x^{-2})`.
    QInvExp { coeffs: Arc<CoefficientTable> },
    /// `F_{2,1/2}(q_n(x) ρ_ν(x))`.
    QRho { nu: f64, coeffs: Arc<CoefficientTable> },
}

impl ImageWeight {
    fn validate(&self) -> Result<()> {
        match *self {
            ImageWeight::Laguerre { alpha, beta, mu, eta } | ImageWeight::LaguerreSqrt { alpha, beta, mu, eta } => {
                if alpha > -1.0 && beta > -1.0 && mu >= 0.0 && eta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "Laguerre image needs α, β > -1, μ ≥ 0, η > 0; got ({alpha}, {beta}, {mu}, {eta})"
                    )))
                }
            }
            ImageWeight::QExp { nu, .. } | ImageWeight::QRho { nu, .. } if nu > 0.0 => Ok(()),
            ImageWeight::QBessel { nu, .. } if nu > 0.0 && nu < 2.0 => Ok(()),
            ImageWeight::QInvExp { .. } => Ok(()),
            _ => Err(Error::Domain(format!("order out of range for {self:?}"))),
        }
    }

    /// The `x`-space function of degree `n` with its decay metadata, and the transform it goes through.
    fn function(&self, n: usize) -> Result<(RealFunction, TransformSpec)> {
        let poly = |coeffs: &Arc<CoefficientTable>| -> Result<Arc<CoefficientTable>> {
            coeffs.row(n)?;
            Ok(coeffs.clone())
        };
        let origin_power = |e: f64| if e < 0.0 { OriginBehavior::PowerSingularity(e) } else { OriginBehavior::LogSingularity };
        let decay_rate = |mu: f64| if mu > 0.0 { DecayProfile::ExpDecay(mu) } else { DecayProfile::NoDecay };
        Ok(match *self {
            ImageWeight::Laguerre { alpha, beta, mu, eta } | ImageWeight::LaguerreSqrt { alpha, beta, mu, eta } => {
                let f = RealFunction::new(
                    move |x| x.powf(beta) * (-mu * x).exp() * laguerre(n, alpha, x).unwrap_or(f64::NAN),
                    decay_rate(mu),
                    origin_power(beta),
                );
                let spec = match self {
                    ImageWeight::Laguerre { .. } => TransformSpec::new(eta, 1.0)?,
                    _ => TransformSpec::new(eta, 0.5)?,
                };
                (f, spec)
            }
            ImageWeight::QExp { nu, ref coeffs } => {
                let q = poly(coeffs)?;
                let f = RealFunction::new(
                    move |x| q.eval(n, x).unwrap_or(f64::NAN) * (-x).exp() * x.powf(0.5 * nu - 1.0),
                    DecayProfile::ExpDecay(1.0),
                    origin_power(0.5 * nu - 1.0),
                );
                (f, TransformSpec::hat())
            }
            ImageWeight::QBessel { nu, ref coeffs } => {
                let q = poly(coeffs)?;
                let f = RealFunction::new(
                    move |x| q.eval(n, x).unwrap_or(f64::NAN) * besselk_real(nu, 2.0 * x.sqrt()).unwrap_or(f64::NAN),
                    DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 },
                    origin_power(-0.5 * nu),
                );
                (f, TransformSpec::hat())
            }
            ImageWeight::QInvExp { ref coeffs } => {
                let q = poly(coeffs)?;
                let f = RealFunction::new(
                    move |x| q.eval(n, x).unwrap_or(f64::NAN) * (-1.0 / x).exp() / (x * x),
                    DecayProfile::NoDecay,
                    OriginBehavior::Bounded,
                );
                (f, TransformSpec::hat())
            }
            ImageWeight::QRho { nu, ref coeffs } => {
                let q = poly(coeffs)?;
                let f = RealFunction::new(
                    move |x| q.eval(n, x).unwrap_or(f64::NAN) * rho_nu(nu, x).unwrap_or(f64::NAN),
                    DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 },
                    OriginBehavior::Bounded,
                );
                (f, TransformSpec::hat())
            }
        })
    }
}

/// The defining `x`-integral of a KL image, by quadrature.
///
/// ```
/// use klortho::families::{kl_image_integral, ImageWeight};
/// use klortho::quad::QuadSpec;
/// // ∫ e^{-x} K_{i}(x) dx = π/sinh(π)
/// let w = ImageWeight::Laguerre { alpha: 0.0, beta: 0.0, mu: 1.0, eta: 1.0 };
/// let v = kl_image_integral(&w, 0, 1.0, &QuadSpec::default()).unwrap();
/// assert!((v - std::f64::consts::PI / std::f64::consts::PI.sinh()).abs() < 1e-10);
/// ```
pub fn kl_image_integral(weight: &ImageWeight, n: usize, tau: f64, quad: &QuadSpec) -> Result<f64> {
    check_degree(n)?;
    weight.validate()?;
    let (f, spec) = weight.function(n)?;
    kl_forward(&f, tau, &spec, quad)
}

/// Closed forms of KL images, each the counterpart of an [`ImageWeight`] integral.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `Laguerre { α, β, μ, η = μ }` as a `3F2` at `1/(2μ)`.
    LaguerreMatched { alpha: f64, beta: f64, mu: f64 },
    /// `Laguerre { α, β = γ, μ = 0, η = 1 }` as two `4F3` at 1, split by the parity of `n`.
    LaguerreBare { alpha: f64, gamma: f64 },
    /// `LaguerreSqrt { α, β = γ, μ = 0, η }` as a `3F1` at `4/η²`.
    LaguerreSqrtBare { alpha: f64, gamma: f64, eta: f64 },
    /// `QBessel`, a four-fold Pochhammer sum.
    QBessel { nu: f64, coeffs: Arc<CoefficientTable> },
    /// `QInvExp` through three `0F2` at -1; needs `τ ≥ 0.05`.
    QInvExp { coeffs: Arc<CoefficientTable> },
    /// `QRho`, a four-fold Pochhammer sum.
    QRho { nu: f64, coeffs: Arc<CoefficientTable> },
}

/// Below this index `QInvExp` is rejected: its two `Γ(±iτ)` terms diverge
/// separately and only their sum has a limit.
pub const INV_EXP_MIN_TAU: f64 = 0.05;

/// Closed-form KL image of member `n` at `τ`.
pub fn kl_image_closed(form: &ClosedForm, n: usize, tau: f64) -> Result<f64> {
    check_degree(n)?;
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("index must be non-negative, got {tau}")));
    }
    let factorial = |k: usize| pochhammer_real(1.0, k);
    match *form {
        ClosedForm::LaguerreMatched { alpha, beta, mu } => {
            if !(alpha > -1.0 && beta > -1.0 && mu > 0.0) {
                return Err(Error::Domain(format!("need α, β > -1 and μ > 0, got ({alpha}, {beta}, {mu})")));
            }
            let ln = 0.5 * PI.ln() - (beta + 1.0) * (2.0 * mu).ln() + ln_gamma_abs_sq(beta + 1.0, tau)?
                - ln_gamma_real(beta + 1.5)?;
            let pre = ln.exp() * pochhammer_real(alpha + 1.0, n) / factorial(n);
            Ok(pre * terminating_sum(n, &[], &[(beta + 1.0, tau)], &[alpha + 1.0, beta + 1.5], 0.5 / mu)?)
        }
        ClosedForm::LaguerreBare { alpha, gamma } => {
            if !(alpha > -1.0 && gamma > -1.0) {
                return Err(Error::Domain(format!("need α, γ > -1, got ({alpha}, {gamma})")));
            }
            let m = n / 2;
            let g1 = gamma_abs_sq(0.5 * (gamma + 1.0), 0.5 * tau)?;
            let g2 = gamma_abs_sq(0.5 * (gamma + 2.0), 0.5 * tau)?;
            let p1 = (0.5 * (gamma + 1.0), 0.5 * tau);
            let p2 = (0.5 * (gamma + 2.0), 0.5 * tau);
            let b1 = [0.5, 0.5 * (1.0 + alpha), 1.0 + 0.5 * alpha];
            let b2 = [1.5, 1.0 + 0.5 * alpha, 0.5 * (3.0 + alpha)];
            let mf = m as f64;
            let (first, second) = if n % 2 == 0 {
                let first = terminating_sum(m, &[0.5 - mf], &[p1], &b1, 1.0)?;
                // top parameter 1-m terminates one step earlier; the term vanishes at m = 0
                let second = if m == 0 { 0.0 } else { terminating_sum(m - 1, &[0.5 - mf], &[p2], &b2, 1.0)? };
                (first, second)
            } else {
                (
                    terminating_sum(m, &[-0.5 - mf], &[p1], &b1, 1.0)?,
                    terminating_sum(m, &[0.5 - mf], &[p2], &b2, 1.0)?,
                )
            };
            let pre = pochhammer_real(1.0 + alpha, n) * 2f64.powf(gamma) / factorial(n);
            Ok(pre * (0.5 * g1 * first - n as f64 / (1.0 + alpha) * g2 * second))
        }
        ClosedForm::LaguerreSqrtBare { alpha, gamma, eta } => {
            if !(alpha > -1.0 && gamma > -1.0 && eta > 0.0) {
                return Err(Error::Domain(format!("need α, γ > -1 and η > 0, got ({alpha}, {gamma}, {eta})")));
            }
            let z = 4.0 / (eta * eta);
            let ln = (gamma + 1.0) * z.ln() + ln_gamma_abs_sq(gamma + 1.0, 0.5 * tau)?;
            let pre = ln.exp() * pochhammer_real(1.0 + alpha, n) / (2.0 * factorial(n));
            Ok(pre * terminating_sum(n, &[], &[(gamma + 1.0, 0.5 * tau)], &[1.0 + alpha], z)?)
        }
        ClosedForm::QBessel { nu, ref coeffs } => {
            if !(nu > 0.0 && nu < 2.0) {
                return Err(Error::Domain(format!("QBessel image needs 0 < ν < 2, got {nu}")));
            }
            let row = coeffs.row(n)?;
            let (p, q, t) = (1.0 + 0.5 * nu, 1.0 - 0.5 * nu, 0.5 * tau);
            let pre = 0.25 * gamma_abs_sq(p, t)? * gamma_abs_sq(q, t)?;
            let sum: f64 = row
                .iter()
                .enumerate()
                .map(|(k, b)| b / pochhammer_real(2.0, 2 * k) * pair_pochhammer(p, t, k) * pair_pochhammer(q, t, k))
                .sum();
            Ok(pre * sum)
        }
        ClosedForm::QInvExp { ref coeffs } => {
            if tau < INV_EXP_MIN_TAU {
                return Err(Error::Domain(format!(
                    "closed form of the e^(-1/x) image is not evaluated below τ = {INV_EXP_MIN_TAU}, got {tau}"
                )));
            }
            let row = coeffs.row(n)?;
            let t = 0.5 * tau;
            let c = |re: f64, im: f64| ComplexValue::new(re, im);
            let zero_f_two = |b1: ComplexValue, b2: ComplexValue| {
                hyp_series(&HypSeriesSpec::new(vec![], vec![b1, b2], c(-1.0, 0.0)))
            };
            let g = gamma_abs_sq(-1.0, t)?;
            let g_minus = complex_gamma(c(0.0, -tau))?;
            let mut first = 0.0;
            let mut paired = ComplexValue::new(0.0, 0.0);
            for (k, &ck) in row.iter().enumerate() {
                let kf = k as f64;
                first += ck * pair_pochhammer(-1.0, t, k) * zero_f_two(c(2.0 - kf, t), c(2.0 - kf, -t))?.re;
                paired += ck * complex_gamma(c(1.0 - kf, -t))? * zero_f_two(c(kf, t), c(1.0, tau))?;
            }
            // the Γ(iτ) term is the conjugate of the Γ(-iτ) term
            Ok(0.5 * g * first + (g_minus * paired).re)
        }
        ClosedForm::QRho { nu, ref coeffs } => {
            if !(nu > 0.0) {
                return Err(Error::Domain(format!("QRho image needs ν > 0, got {nu}")));
            }
            let row = coeffs.row(n)?;
            let t = 0.5 * tau;
            let ln = ln_gamma_abs_sq(1.0 + nu, t)? + ln_gamma_abs_sq(1.0, t)? - ln_gamma_real(2.0 + nu)?;
            let sum: f64 = row
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    c / pochhammer_real(2.0 + nu, 2 * k) * pair_pochhammer(1.0 + nu, t, k) * pair_pochhammer(1.0, t, k)
                })
                .sum();
            Ok(0.5 * ln.exp() * sum)
        }
    }
}

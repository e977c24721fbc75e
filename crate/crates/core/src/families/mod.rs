//! Polynomial families and the functions they generate.
//!
//! Conjugate parameter pairs such as `a ± it` enter every sum through the
//! real product `(a+it)_k (a-it)_k = Π_j ((a+j)² + t²)`, so all values are
//! real by construction and no imaginary residue has to be discarded.

mod coeffs;
mod images;

pub use coeffs::{load_coefficients, orthonormal_from_moments, CoefficientTable};
pub use images::{kl_image_closed, kl_image_integral, ClosedForm, ImageWeight, INV_EXP_MIN_TAU};

use crate::error::{Error, Result};
use crate::kl::RealFunction;
use crate::quad::{DecayProfile, OriginBehavior};
use crate::specfun::{gamma_abs_sq, ln_gamma_real, pochhammer_real, MAX_DEGREE, POLE_TOLERANCE};
use std::f64::consts::PI;
use std::sync::Arc;

/// Which member of a convolution-orthogonal pair: `f_n` or `g_m`.
/// The `g` family is the `f` family with `a` and `b` exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

/// A family of polynomials or generated functions with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Laguerre { alpha: f64 },
    Wilson { a: f64, b: f64, c: f64, d: f64 },
    ContinuousDualHahn { a: f64, b: f64, c: f64 },
    /// `2(a+b)_n(a+c)_n x^{a-1} 1F2(-n; a+b, a+c; x)`, orthogonal under the hat convolution.
    CdhPower { side: Side, a: f64, b: f64, c: f64 },
    /// `2^a/√π x^{a-1} e^{-x} (a+b)_n(a+c)_n 2F2(-n, a+1/2; a+b, a+c; 2x)`.
    CdhExp { side: Side, a: f64, b: f64, c: f64 },
    /// `2x^{a-1} (a+b)_n(a+c)_n(a+d)_n 2F3(-n, n+a+b+c+d-1; a+b, a+c, a+d; x)`.
    WilsonPower { side: Side, a: f64, b: f64, c: f64, d: f64 },
    /// `2^a/√π x^{a-1} e^{-x} (a+b)_n(a+c)_n(a+d)_n 3F3(-n, n+a+b+c+d-1, a+1/2; a+b, a+c, a+d; 2x)`.
    WilsonExp { side: Side, a: f64, b: f64, c: f64, d: f64 },
    /// `(-1)^n (1+α)_n (1+α+ν)_n 1F2(-n; 1+α, 1+α+ν; x)`.
    PrudnikovP { nu: f64, alpha: f64 },
    /// `(-1)^n (1+α)_n (1+α+ν)_n 5F4(-n, 1+ν±iτ, 1±iτ; (ν+2)/2, (ν+3)/2, 1+α, 1+α+ν; 1/4)`.
    PrudnikovV { nu: f64, alpha: f64 },
    /// As `PrudnikovV` with `2+ν±iτ` on top and `(ν+3)/2, (ν+4)/2` below.
    PrudnikovS { nu: f64, alpha: f64 },
    /// `Σ_k a_{n,k} (1+iτ)_k (1-iτ)_k` for an injected coefficient table.
    PrudnikovS39 { nu: f64, alpha: f64, coeffs: Arc<CoefficientTable> },
    /// `Σ_k a_{m,k}/(2α+ν)_{2k} (α+ν±iτ)_k (α±iτ)_k`.
    PrudnikovU310 { nu: f64, alpha: f64, coeffs: Arc<CoefficientTable> },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, ps: &[f64]| {
            if ps.iter().all(|&p| p > 0.0 && p.is_finite()) {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} parameters must be positive, got {ps:?}")))
            }
        };
        let below_half = |c: f64| {
            if c < 0.5 {
                Ok(())
            } else {
                Err(Error::Domain(format!("exponential families need 0 < c < 1/2, got c = {c}")))
            }
        };
        let prudnikov = |nu: f64, alpha: f64| {
            if nu >= 0.0 && alpha > 0.0 && nu.is_finite() && alpha.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("Prudnikov families need ν ≥ 0 and α > 0, got ({nu}, {alpha})")))
            }
        };
        match *self {
            FamilySpec::Laguerre { alpha } if alpha > -1.0 && alpha.is_finite() => Ok(()),
            FamilySpec::Laguerre { alpha } => Err(Error::Domain(format!("Laguerre needs α > -1, got {alpha}"))),
            FamilySpec::Wilson { a, b, c, d } | FamilySpec::WilsonPower { a, b, c, d, .. } => {
                positive("Wilson", &[a, b, c, d])
            }
            FamilySpec::WilsonExp { a, b, c, d, .. } => positive("Wilson", &[a, b, c, d]).and(below_half(c)),
            FamilySpec::ContinuousDualHahn { a, b, c } | FamilySpec::CdhPower { a, b, c, .. } => {
                positive("continuous dual Hahn", &[a, b, c])
            }
            FamilySpec::CdhExp { a, b, c, .. } => positive("continuous dual Hahn", &[a, b, c]).and(below_half(c)),
            FamilySpec::PrudnikovP { nu, alpha }
            | FamilySpec::PrudnikovV { nu, alpha }
            | FamilySpec::PrudnikovS { nu, alpha }
            | FamilySpec::PrudnikovS39 { nu, alpha, .. }
            | FamilySpec::PrudnikovU310 { nu, alpha, .. } => prudnikov(nu, alpha),
        }
    }

    /// The family with the `f`/`g` side switched, or itself when sides do not apply.
    pub fn with_side(&self, side: Side) -> FamilySpec {
        let mut out = self.clone();
        match &mut out {
            FamilySpec::CdhPower { side: s, .. }
            | FamilySpec::CdhExp { side: s, .. }
            | FamilySpec::WilsonPower { side: s, .. }
            | FamilySpec::WilsonExp { side: s, .. } => *s = side,
            _ => {}
        }
        out
    }

    /// Value of member `n` at `arg`: `x` for Laguerre, generated families and
    /// `p_n`; `t` for Wilson and continuous dual Hahn (evaluated at `t²`);
    /// `τ` for the other Prudnikov transforms.
    pub fn eval(&self, n: usize, arg: f64) -> Result<f64> {
        match self {
            FamilySpec::Laguerre { alpha } => laguerre(n, *alpha, arg),
            FamilySpec::Wilson { .. } | FamilySpec::ContinuousDualHahn { .. } => askey_poly(self, n, arg),
            FamilySpec::CdhPower { .. }
            | FamilySpec::CdhExp { .. }
            | FamilySpec::WilsonPower { .. }
            | FamilySpec::WilsonExp { .. } => generated_function(self, n, arg),
            _ => prudnikov_poly(self, n, arg),
        }
    }
}

pub(crate) fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Domain(format!("degree {n} exceeds the supported maximum {MAX_DEGREE}")));
    }
    Ok(())
}

/// `Σ_{k=0}^n (-n)_k Π(p)_k Π|(q+it)_k|² / (Π(b)_k k!) z^k`.
pub(crate) fn terminating_sum(n: usize, top: &[f64], pairs: &[(f64, f64)], bottom: &[f64], z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let mut r = (kf - n as f64) * z / (kf + 1.0);
        for &p in top {
            r *= p + kf;
        }
        for &(q, t) in pairs {
            r *= (q + kf).powi(2) + t * t;
        }
        for &b in bottom {
            let d = b + kf;
            if d.abs() < POLE_TOLERANCE {
                return Err(Error::Domain(format!("bottom parameter {b} hits a pole at index {k}")));
            }
            r /= d;
        }
        term *= r;
        sum += term;
    }
    Ok(sum)
}

/// `(q+it)_k (q-it)_k`.
pub(crate) fn pair_pochhammer(q: f64, t: f64, k: usize) -> f64 {
    (0..k).map(|j| (q + j as f64).powi(2) + t * t).product()
}

/// Associated Laguerre polynomial `L_n^α(x) = Σ_k (-1)^k C(n+α, n-k) x^k/k!`.
///
/// ```
/// let l = klortho::families::laguerre(1, 0.5, 2.0).unwrap();
/// assert!((l - (1.5 - 2.0)).abs() < 1e-15);
/// ```
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_degree(n)?;
    if !(alpha > -1.0) {
        return Err(Error::Domain(format!("Laguerre needs α > -1, got {alpha}")));
    }
    // C(n+α, n) · 1F1(-n; α+1; x)
    let lead = pochhammer_real(alpha + 1.0, n) / pochhammer_real(1.0, n);
    Ok(lead * terminating_sum(n, &[], &[], &[alpha + 1.0], x)?)
}

/// Wilson `W_n(t²)` or continuous dual Hahn `S_n(t²)` with their printed prefactors.
pub fn askey_poly(family: &FamilySpec, n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    family.validate()?;
    match *family {
        FamilySpec::Wilson { a, b, c, d } => {
            let pre = pochhammer_real(a + b, n) * pochhammer_real(a + c, n) * pochhammer_real(a + d, n);
            let s = a + b + c + d;
            Ok(pre * terminating_sum(n, &[n as f64 + s - 1.0], &[(a, t)], &[a + b, a + c, a + d], 1.0)?)
        }
        FamilySpec::ContinuousDualHahn { a, b, c } => {
            let pre = pochhammer_real(a + b, n) * pochhammer_real(a + c, n);
            Ok(pre * terminating_sum(n, &[], &[(a, t)], &[a + b, a + c], 1.0)?)
        }
        _ => Err(Error::Domain(format!("askey_poly expects a Wilson or continuous dual Hahn family, got {family:?}"))),
    }
}

/// Parameters `(a, b)` after applying the side swap.
fn sided(side: Side, a: f64, b: f64) -> (f64, f64) {
    match side {
        Side::F => (a, b),
        Side::G => (b, a),
    }
}

/// Value of a generated function family at `x > 0`.
pub fn generated_function(family: &FamilySpec, n: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    family.validate()?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("generated functions live on x > 0, got {x}")));
    }
    let nf = n as f64;
    let exp_pre = |a: f64| ((a * 2f64.ln() - 0.5 * PI.ln() - x).exp(), 2.0 * x);
    match *family {
        FamilySpec::CdhPower { side, a, b, c } => {
            let (a, b) = sided(side, a, b);
            let pre = 2.0 * pochhammer_real(a + b, n) * pochhammer_real(a + c, n) * x.powf(a - 1.0);
            Ok(pre * terminating_sum(n, &[], &[], &[a + b, a + c], x)?)
        }
        FamilySpec::CdhExp { side, a, b, c } => {
            let (a, b) = sided(side, a, b);
            let (scale, z) = exp_pre(a);
            let pre = scale * x.powf(a - 1.0) * pochhammer_real(a + b, n) * pochhammer_real(a + c, n);
            Ok(pre * terminating_sum(n, &[a + 0.5], &[], &[a + b, a + c], z)?)
        }
        FamilySpec::WilsonPower { side, a, b, c, d } => {
            let (a, b) = sided(side, a, b);
            let s = a + b + c + d;
            let pre = 2.0 * x.powf(a - 1.0) * pochhammer_real(a + b, n) * pochhammer_real(a + c, n) * pochhammer_real(a + d, n);
            Ok(pre * terminating_sum(n, &[nf + s - 1.0], &[], &[a + b, a + c, a + d], x)?)
        }
        FamilySpec::WilsonExp { side, a, b, c, d } => {
            let (a, b) = sided(side, a, b);
            let s = a + b + c + d;
            let (scale, z) = exp_pre(a);
            let pre = scale * x.powf(a - 1.0) * pochhammer_real(a + b, n) * pochhammer_real(a + c, n) * pochhammer_real(a + d, n);
            Ok(pre * terminating_sum(n, &[nf + s - 1.0, a + 0.5], &[], &[a + b, a + c, a + d], z)?)
        }
        _ => Err(Error::Domain(format!("not a generated function family: {family:?}"))),
    }
}

/// Closed-form transform of a generated function: `F_{2,1/2}` for the power
/// families, `F` for the exponential ones.
///
/// Power families map to `|Γ(a+iτ/2)|² P_n(τ²/4)` and exponential ones to
/// `|Γ(a+iτ)|²/Γ(a+1/2) P_n(τ²)`, where `P_n` is the matching continuous dual
/// Hahn or Wilson polynomial and `a` is the side's leading parameter.
pub fn generated_image(family: &FamilySpec, n: usize, tau: f64) -> Result<f64> {
    check_degree(n)?;
    family.validate()?;
    match *family {
        FamilySpec::CdhPower { side, a, b, c } => {
            let lead = sided(side, a, b).0;
            let p = askey_poly(&FamilySpec::ContinuousDualHahn { a, b, c }, n, 0.5 * tau)?;
            Ok(gamma_abs_sq(lead, 0.5 * tau)? * p)
        }
        FamilySpec::WilsonPower { side, a, b, c, d } => {
            let lead = sided(side, a, b).0;
            let p = askey_poly(&FamilySpec::Wilson { a, b, c, d }, n, 0.5 * tau)?;
            Ok(gamma_abs_sq(lead, 0.5 * tau)? * p)
        }
        FamilySpec::CdhExp { side, a, b, c } => {
            let lead = sided(side, a, b).0;
            let p = askey_poly(&FamilySpec::ContinuousDualHahn { a, b, c }, n, tau)?;
            Ok((crate::specfun::ln_gamma_abs_sq(lead, tau)? - ln_gamma_real(lead + 0.5)?).exp() * p)
        }
        FamilySpec::WilsonExp { side, a, b, c, d } => {
            let lead = sided(side, a, b).0;
            let p = askey_poly(&FamilySpec::Wilson { a, b, c, d }, n, tau)?;
            Ok((crate::specfun::ln_gamma_abs_sq(lead, tau)? - ln_gamma_real(lead + 0.5)?).exp() * p)
        }
        _ => Err(Error::Domain(format!("not a generated function family: {family:?}"))),
    }
}

/// A generated function member as a [`RealFunction`] with its decay metadata.
pub fn generated_real_function(family: &FamilySpec, n: usize) -> Result<RealFunction> {
    check_degree(n)?;
    family.validate()?;
    let (decay, lead) = match *family {
        FamilySpec::CdhPower { side, a, b, .. } | FamilySpec::WilsonPower { side, a, b, .. } => {
            (DecayProfile::NoDecay, sided(side, a, b).0)
        }
        FamilySpec::CdhExp { side, a, b, .. } | FamilySpec::WilsonExp { side, a, b, .. } => {
            (DecayProfile::ExpDecay(1.0), sided(side, a, b).0)
        }
        _ => return Err(Error::Domain(format!("not a generated function family: {family:?}"))),
    };
    let origin = if lead < 1.0 { OriginBehavior::PowerSingularity(lead - 1.0) } else { OriginBehavior::Bounded };
    let fam = family.clone();
    Ok(RealFunction::new(move |x| generated_function(&fam, n, x).unwrap_or(f64::NAN), decay, origin))
}

/// Prudnikov-type polynomials: `p_n(x)`, or `V_n`, `S_n`, `S39`, `U310` at `τ`.
pub fn prudnikov_poly(family: &FamilySpec, n: usize, arg: f64) -> Result<f64> {
    check_degree(n)?;
    family.validate()?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let lead = |nu: f64, alpha: f64| sign * pochhammer_real(1.0 + alpha, n) * pochhammer_real(1.0 + alpha + nu, n);
    match family {
        &FamilySpec::PrudnikovP { nu, alpha } => {
            Ok(lead(nu, alpha) * terminating_sum(n, &[], &[], &[1.0 + alpha, 1.0 + alpha + nu], arg)?)
        }
        &FamilySpec::PrudnikovV { nu, alpha } => {
            let bottom = [0.5 * (nu + 2.0), 0.5 * (nu + 3.0), 1.0 + alpha, 1.0 + alpha + nu];
            Ok(lead(nu, alpha) * terminating_sum(n, &[], &[(1.0 + nu, arg), (1.0, arg)], &bottom, 0.25)?)
        }
        &FamilySpec::PrudnikovS { nu, alpha } => {
            let bottom = [0.5 * (nu + 3.0), 0.5 * (nu + 4.0), 1.0 + alpha, 1.0 + alpha + nu];
            Ok(lead(nu, alpha) * terminating_sum(n, &[], &[(2.0 + nu, arg), (1.0, arg)], &bottom, 0.25)?)
        }
        FamilySpec::PrudnikovS39 { coeffs, .. } => {
            let row = coeffs.row(n)?;
            Ok(row.iter().enumerate().map(|(k, a)| a * pair_pochhammer(1.0, arg, k)).sum())
        }
        FamilySpec::PrudnikovU310 { nu, alpha, coeffs } => {
            let row = coeffs.row(n)?;
            Ok(row
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    a / pochhammer_real(2.0 * alpha + nu, 2 * k)
                        * pair_pochhammer(alpha + nu, arg, k)
                        * pair_pochhammer(*alpha, arg, k)
                })
                .sum())
        }
        _ => Err(Error::Domain(format!("not a Prudnikov family: {family:?}"))),
    }
}

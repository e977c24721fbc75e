//! Vanishing moments of the `p_n` polynomials against `ρ_ν` and `ρ_{ν+1}`,
//! in `x` and through their index-side twins `V_n`, `S_n`.

use super::{CaseId, EntryError};
use crate::error::{Error, Result};
use crate::families::{prudnikov_poly, FamilySpec};
use crate::quad::{try_integrate_semiinf, try_integrate_tau_index, DecayProfile, OriginBehavior, QuadResult, QuadSpec};
use crate::specfun::{ln_cosh, ln_gamma_abs_sq, rho_nu};
use serde::Serialize;
use std::f64::consts::PI;

const ROUGH_DECAY: DecayProfile = DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 };

/// Normalized residuals `|∫h| / ∫|h|` for one moment index `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DOrthEntry {
    pub m: usize,
    pub x_residual: f64,
    pub tau_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DOrthReport {
    /// Degree of the polynomial tested, `2n` or `2n+1`.
    pub degree: usize,
    pub entries: Vec<DOrthEntry>,
    pub errors: Vec<EntryError>,
}

struct Layout {
    degree: usize,
    /// `ρ_{ν+shift}` in `x`, `|Γ(1+shift+ν+iτ)|²` in `τ`.
    shift: f64,
    moments: usize,
}

fn layout(case: CaseId, n: usize) -> Result<Layout> {
    let (degree, shift, moments) = match case {
        CaseId::DOrthEvenV => (2 * n, 0.0, n),
        CaseId::DOrthEvenS => (2 * n, 1.0, n),
        CaseId::DOrthOddV => (2 * n + 1, 0.0, n + 1),
        CaseId::DOrthOddS => (2 * n + 1, 1.0, n),
        _ => return Err(Error::Domain(format!("{case} is not a d-orthogonality case"))),
    };
    Ok(Layout { degree, shift, moments })
}

/// `|∫h| / ∫|h|`, the denominator taken from the same nodes as the numerator.
/// `|h|` has kinks at the roots of the polynomial, so integrating it on its
/// own would stall well before the numerator's tolerance.
fn normalized(r: Result<QuadResult>, what: &'static str) -> Result<f64> {
    let r = r?;
    let total = r.magnitude;
    let signed = r.require_to_rounding(what)?;
    Ok(if total == 0.0 { 0.0 } else { signed.abs() / total })
}

/// Residuals of the vanishing moments of `p_{2n}` or `p_{2n+1}` for every
/// `m` in the relation's range. Quadrature failures are recorded in the
/// report with a `NaN` residual.
pub fn d_orth_check(case: CaseId, nu: f64, alpha: f64, n: usize, quad: &QuadSpec) -> Result<DOrthReport> {
    if !(nu > 0.0 && alpha > 0.0) {
        return Err(Error::Domain(format!("d-orthogonality needs ν > 0 and α > 0, got ({nu}, {alpha})")));
    }
    if n > 3 {
        return Err(Error::Domain(format!("d-orthogonality checks support n ≤ 3, got {n}")));
    }
    let l = layout(case, n)?;
    let p = FamilySpec::PrudnikovP { nu, alpha };
    let twin = match case {
        CaseId::DOrthEvenV | CaseId::DOrthOddV => FamilySpec::PrudnikovV { nu, alpha },
        _ => FamilySpec::PrudnikovS { nu, alpha },
    };
    let order = nu + l.shift;
    let mut entries = Vec::with_capacity(l.moments);
    let mut errors = Vec::new();
    for m in 0..l.moments {
        let power = alpha + m as f64;
        let x_side = normalized(
            try_integrate_semiinf(
                |x: f64| Ok(prudnikov_poly(&p, l.degree, x)? * rho_nu(order, x)? * x.powf(power)),
                ROUGH_DECAY,
                OriginBehavior::Bounded,
                quad,
            ),
            "x-space moment",
        );
        let tau_side = normalized(
            try_integrate_tau_index(
                |tau: f64| {
                    if tau <= 0.0 {
                        return Ok(0.0);
                    }
                    let ln = 2.0 * tau.ln() + ln_gamma_abs_sq(1.0 + order, tau)? + ln_gamma_abs_sq(power, tau)?
                        + ln_cosh(PI * tau)
                        - PI.ln();
                    Ok(ln.exp() * prudnikov_poly(&twin, l.degree, tau)?)
                },
                Some(DecayProfile::IndexDecay(0.5 * PI)),
                quad,
            ),
            "index-side moment",
        );
        let mut keep = |r: Result<f64>| match r {
            Ok(v) => v,
            Err(e) => {
                errors.push(EntryError { n, m, message: e.to_string() });
                f64::NAN
            }
        };
        let x_residual = keep(x_side);
        let tau_residual = keep(tau_side);
        entries.push(DOrthEntry { m, x_residual, tau_residual });
    }
    Ok(DOrthReport { degree: l.degree, entries, errors })
}

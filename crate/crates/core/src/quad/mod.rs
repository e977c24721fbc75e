//! Double-exponential quadrature on `(0, ∞)`, for index integrals over `τ`,
//! on finite intervals, for Fourier sine integrals and on `(0, ∞)²`.
//!
//! All engines refine a trapezoid rule in a transformed variable by halving
//! the step; the error estimate is the difference between the last two
//! levels. Integrand values are computed in parallel and summed in a fixed
//! order, so results do not depend on the thread count (set
//! `KLORTHO_THREADS` to cap it).

mod de;
mod finite;
mod fourier;
mod twod;

pub use de::{
    integrate_semiinf, integrate_semiinf_origin, integrate_tau_index, try_integrate_semiinf,
    try_integrate_tau_index,
};
pub use finite::{integrate_finite, try_integrate_finite, try_integrate_finite_gaps};
pub use fourier::try_integrate_sine;
pub use twod::{integrate_2d, try_integrate_2d};

use crate::error::{Error, Result};
use rayon::prelude::*;
use std::sync::Once;

/// Tolerances and refinement budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
    /// Added to `ln(1/abs_tol)` when choosing truncation points.
    pub truncation_margin: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_refinements: 9, truncation_margin: 20.0 }
    }
}

impl QuadSpec {
    /// Defaults for 2-D integrals.
    pub fn two_dim() -> Self {
        QuadSpec { abs_tol: 1e-10, rel_tol: 1e-7, max_refinements: 7, truncation_margin: 20.0 }
    }

    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadSpec { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t < 1.0;
        if !ok(self.abs_tol) || !ok(self.rel_tol) {
            return Err(Error::Domain("tolerances must lie in (0, 1)".into()));
        }
        if self.max_refinements < 1 {
            return Err(Error::Domain("max_refinements must be at least 1".into()));
        }
        if !(self.truncation_margin >= 0.0) {
            return Err(Error::Domain("truncation_margin must be non-negative".into()));
        }
        Ok(())
    }

    /// Log-scale cutoff `ln(1/abs_tol) + margin`.
    pub fn log_cutoff(&self) -> f64 {
        (1.0 / self.abs_tol).ln() + self.truncation_margin
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Estimate of `∫|f|`; cancellation limits attainable accuracy to a small
    /// multiple of `ε·magnitude`.
    pub magnitude: f64,
}

impl QuadResult {
    /// The value, or a non-convergence error naming `what`.
    pub fn require(self, what: &'static str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence { what, value: self.value, err: self.err_estimate })
        }
    }

    /// Like [`require`](Self::require), but also accepts a result whose error
    /// has reached the rounding floor set by cancellation in the sum.
    pub fn require_to_rounding(self, what: &'static str) -> Result<f64> {
        if self.converged || self.err_estimate <= ROUNDING_FLOOR * self.magnitude {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence { what, value: self.value, err: self.err_estimate })
        }
    }
}

/// Accuracy floor, relative to `∫|f|`, set by rounding in the sum and in the
/// integrand values themselves.
pub const ROUNDING_FLOOR: f64 = 1e-11;

/// Decay of an integrand at infinity; sets the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayProfile {
    /// `|f(x)| ≲ e^{-rate·x}`.
    ExpDecay(f64),
    /// `|f(x)| ≲ e^{-rate·√x}`.
    SqrtExpDecay(f64),
    /// `|f(x)| ≲ e^{-rate·x^power}`, `power > 0`.
    StretchedExpDecay { rate: f64, power: f64 },
    /// `|f(x)| ≲ exp(-e^x)`.
    DoubleExpDecay,
    /// `|h(τ)| ≲ e^{-delta_sum·τ}` for index integrands.
    IndexDecay(f64),
    /// `|f(x)| ≲ x^{-p}` with `p > 1`.
    PowerDecay(f64),
    /// No decay of its own; only usable as a factor of a decaying product.
    NoDecay,
}

impl DecayProfile {
    pub fn validate(&self) -> Result<()> {
        let rate = match *self {
            DecayProfile::ExpDecay(r) | DecayProfile::SqrtExpDecay(r) | DecayProfile::IndexDecay(r) => r,
            DecayProfile::StretchedExpDecay { rate, power } => rate.min(power),
            DecayProfile::DoubleExpDecay => 1.0,
            DecayProfile::PowerDecay(p) => p - 1.0,
            DecayProfile::NoDecay => 0.0,
        };
        if rate > 0.0 && rate.is_finite() {
            Ok(())
        } else {
            Err(Error::MissingDecay(format!("{self:?} does not decay")))
        }
    }

    /// Of two valid bounds on the same integrand, the one that truncates earlier.
    pub fn tighter(self, other: DecayProfile, cutoff: f64) -> DecayProfile {
        if other.validate().is_err() {
            return self;
        }
        if self.validate().is_err() || other.truncation(cutoff) < self.truncation(cutoff) {
            other
        } else {
            self
        }
    }

    /// Point beyond which the integrand is below `e^{-cutoff}`.
    pub fn truncation(&self, cutoff: f64) -> f64 {
        match *self {
            DecayProfile::ExpDecay(r) | DecayProfile::IndexDecay(r) => cutoff / r,
            DecayProfile::SqrtExpDecay(r) => (cutoff / r).powi(2),
            DecayProfile::StretchedExpDecay { rate, power } => (cutoff / rate).powf(1.0 / power),
            DecayProfile::DoubleExpDecay => cutoff.ln().max(1.0),
            DecayProfile::PowerDecay(p) => (cutoff / (p - 1.0)).min(690.0).exp(),
            DecayProfile::NoDecay => f64::INFINITY,
        }
    }
}

/// Behaviour at the origin; sets the lower truncation point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum OriginBehavior {
    Bounded,
    #[default]
    LogSingularity,
    /// `|f(x)| ≲ x^e` with `e > -1`.
    PowerSingularity(f64),
}

impl OriginBehavior {
    /// The rougher of two behaviours, for products of functions.
    pub fn rougher(self, other: OriginBehavior) -> OriginBehavior {
        if other.lower_cutoff() < self.lower_cutoff() {
            other
        } else {
            self
        }
    }

    pub fn lower_cutoff(&self) -> f64 {
        match *self {
            OriginBehavior::Bounded => 1e-20,
            OriginBehavior::LogSingularity => 1e-22,
            OriginBehavior::PowerSingularity(e) => {
                let e1 = (e + 1.0).max(0.05);
                10f64.powf(-18.0 / e1).max(1e-300)
            }
        }
    }
}

static POOL: Once = Once::new();

pub(crate) fn init_pool() {
    POOL.call_once(|| {
        if let Some(n) = std::env::var("KLORTHO_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    });
}

/// Evaluates `f` at every node, in parallel for larger batches, keeping order.
pub(crate) fn eval_nodes<F>(f: &F, nodes: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let check = |x: f64, v: f64| {
        if v.is_nan() {
            Err(Error::Domain(format!("integrand returned NaN at {x}")))
        } else {
            Ok(v)
        }
    };
    if nodes.len() < 16 {
        return nodes.iter().map(|&x| f(x).and_then(|v| check(x, v))).collect();
    }
    init_pool();
    nodes.par_iter().map(|&x| f(x).and_then(|v| check(x, v))).collect()
}

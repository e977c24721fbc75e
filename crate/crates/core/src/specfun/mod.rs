//! Scalar special functions: complex log-gamma, Pochhammer symbols,
//! generalized hypergeometric sums and Macdonald functions `K_ν`, `K_{iτ}`.
//!
//! Accuracy contract (all inside the supported box `ν ∈ [0, 10]`,
//! `τ ∈ [0, 40]`, `x ∈ (0, 200]`, degrees `n ≤ 10`):
//!
//! - [`complex_lngamma`]: at least 12 significant digits of `Γ(z)` for `|z| ≤ 50`.
//! - [`besselk_real`], [`besselk_imag`]: relative error below `1e-12` away from
//!   zeros of `K_{iτ}`; absolute error below `1e-14·e^{-πτ/2}` near them.
//! - Terminating sums are exact up to the rounding of `n + 1` terms.

mod bessel;
mod gamma;
mod hyper;

pub use bessel::{
    TAU_HARD_CAP,
    besselk, besselk_imag, besselk_imag_xscaled, besselk_real, besselk_real_xscaled, rho_nu,
    MacdonaldOrder,
};
pub use gamma::{
    complex_gamma, complex_lngamma, gamma_abs_sq, ln_gamma_abs_sq, ln_gamma_real, pochhammer,
    pochhammer_real,
};
pub use hyper::{hyp_series, hyp_terminating, HypSeriesSpec};

/// Complex number carried through gamma and hypergeometric evaluation.
pub type ComplexValue = num_complex::Complex64;

/// Upper edge of the documented parameter box.
pub const MAX_ORDER_REAL: f64 = 10.0;
pub const MAX_ORDER_IMAG: f64 = 40.0;
pub const MAX_ARGUMENT: f64 = 200.0;
pub const MAX_DEGREE: usize = 10;

/// Distance from a nonpositive integer below which arguments count as poles.
pub const POLE_TOLERANCE: f64 = 1e-10;

/// `ln(sinh x)` for `x > 0` without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `ln(cosh x)` without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x - std::f64::consts::LN_2 + (-2.0 * x).exp().ln_1p()
}

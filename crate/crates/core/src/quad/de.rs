use super::{eval_nodes, DecayProfile, OriginBehavior, QuadResult, QuadSpec};
use crate::error::{Error, Result};
use crate::specfun::TAU_HARD_CAP;
use std::f64::consts::FRAC_PI_2;

const H0: f64 = 0.5;
const MAX_TAIL_STEPS: usize = 40;

/// Variable changes from `t ∈ ℝ` onto `(0, ∞)`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Map {
    /// `x = exp(t - e^{-t})`: double-exponential at 0, single at ∞;
    /// suited to exponentially decaying integrands.
    Exp,
    /// `x = exp(π/2·sinh t)`: double-exponential at both ends, for algebraic tails.
    ExpSinh,
}

impl Map {
    pub(crate) fn for_profile(profile: &DecayProfile) -> Self {
        match profile {
            DecayProfile::PowerDecay(_) => Map::ExpSinh,
            _ => Map::Exp,
        }
    }

    /// `(x(t), x'(t))`.
    pub(crate) fn point(self, t: f64) -> (f64, f64) {
        match self {
            Map::Exp => {
                let e = (-t).exp();
                let x = (t - e).exp();
                if x == 0.0 {
                    (0.0, 0.0)
                } else {
                    (x, x * (1.0 + e))
                }
            }
            Map::ExpSinh => {
                let x = (FRAC_PI_2 * t.sinh()).exp();
                if x == 0.0 || x.is_infinite() {
                    (x, 0.0)
                } else {
                    (x, x * FRAC_PI_2 * t.cosh())
                }
            }
        }
    }

    pub(crate) fn t_of(self, x: f64) -> f64 {
        let lx = x.ln();
        match self {
            Map::Exp => {
                let (mut lo, mut hi): (f64, f64) = (-8.0, 720.0);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if mid - (-mid).exp() < lx {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
            Map::ExpSinh => (lx / FRAC_PI_2).asinh(),
        }
    }
}

/// Nested trapezoid refinement of `∫ f(x) dx` over `(x_lo, x_hi)` through `map`,
/// with tails extended past the declared window while they still matter.
pub(crate) fn de_engine<F>(f: &F, map: Map, x_lo: f64, x_hi: f64, x_cap: f64, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let g = |t: f64| -> Result<f64> {
        let (x, w) = map.point(t);
        // the grid is anchored at multiples of H0, so its last node may overshoot the cap
        if w == 0.0 || !x.is_finite() || x <= 0.0 || x > x_cap {
            return Ok(0.0);
        }
        let v = f(x)?;
        Ok(if v == 0.0 { 0.0 } else { v * w })
    };
    let t_lo = map.t_of(x_lo);
    let t_hi = map.t_of(x_hi.min(x_cap)).max(t_lo + H0);
    trapezoid_in_t(&g, t_lo, t_hi, |t| map.point(t).0 >= 1e-300, |t| map.point(t).0 <= x_cap, spec)
}

/// Trapezoid rule in `t` on a grid anchored at multiples of `H0`, refined by
/// halving. The window `[t_lo, t_hi]` grows while edge terms are significant
/// and the `extend_*` predicates allow it.
pub(crate) fn trapezoid_in_t<G>(
    g: &G,
    t_lo: f64,
    t_hi: f64,
    extend_lo: impl Fn(f64) -> bool,
    extend_hi: impl Fn(f64) -> bool,
    spec: &QuadSpec,
) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let mut j_lo = (t_lo / H0).floor() as i64;
    let mut j_hi = ((t_hi / H0).ceil() as i64).max(j_lo + 1);
    let nodes: Vec<f64> = (j_lo..=j_hi).map(|j| j as f64 * H0).collect();
    let vals = eval_nodes(g, &nodes)?;
    let mut evaluations = vals.len();
    let mut sum: f64 = vals.iter().sum();
    let mut abs_sum: f64 = vals.iter().map(|v| v.abs()).sum();
    let (mut first, mut last) = (vals[0], vals[vals.len() - 1]);

    for _ in 0..MAX_TAIL_STEPS {
        let tol = spec.tolerance_for(H0 * sum);
        let mut grew = false;
        let t_next = (j_hi + 1) as f64 * H0;
        if (H0 * last).abs() > 0.01 * tol && extend_hi(t_next) {
            j_hi += 1;
            last = g(t_next)?;
            sum += last;
            abs_sum += last.abs();
            evaluations += 1;
            grew = true;
        }
        let t_prev = (j_lo - 1) as f64 * H0;
        if (H0 * first).abs() > 0.01 * tol && extend_lo(t_prev) {
            j_lo -= 1;
            first = g(t_prev)?;
            sum += first;
            abs_sum += first.abs();
            evaluations += 1;
            grew = true;
        }
        if !grew {
            break;
        }
    }

    let t0 = j_lo as f64 * H0;
    let mut h = H0;
    let mut prev = h * sum;
    let mut err = f64::INFINITY;
    for level in 1..=spec.max_refinements {
        h *= 0.5;
        let count = ((j_hi - j_lo) as usize) << (level - 1);
        let fresh: Vec<f64> = (0..count).map(|i| t0 + (2 * i + 1) as f64 * h).collect();
        let vals = eval_nodes(g, &fresh)?;
        evaluations += vals.len();
        sum += vals.iter().sum::<f64>();
        abs_sum += vals.iter().map(|v| v.abs()).sum::<f64>();
        let cur = h * sum;
        err = (cur - prev).abs();
        prev = cur;
        if level >= 2 && err <= spec.tolerance_for(cur) {
            return Ok(QuadResult { value: cur, err_estimate: err, evaluations, converged: true, magnitude: h * abs_sum });
        }
    }
    Ok(QuadResult { value: prev, err_estimate: err, evaluations, converged: false, magnitude: h * abs_sum })
}

/// `∫₀^∞ f(x) dx` for an integrand with the declared decay and origin behaviour.
pub fn try_integrate_semiinf<F>(f: F, profile: DecayProfile, origin: OriginBehavior, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    profile.validate()?;
    let x_hi = profile.truncation(spec.log_cutoff());
    de_engine(&f, Map::for_profile(&profile), origin.lower_cutoff(), x_hi, f64::MAX, spec)
}

/// `∫₀^∞ f(x) dx`, allowing a logarithmic singularity at the origin.
///
/// ```
/// use klortho::quad::{integrate_semiinf, DecayProfile, QuadSpec};
/// let r = integrate_semiinf(|x: f64| x * (-x).exp(), DecayProfile::ExpDecay(1.0), &QuadSpec::default());
/// assert!(r.converged && (r.value - 1.0).abs() < 1e-12);
/// ```
pub fn integrate_semiinf<F>(f: F, profile: DecayProfile, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync,
{
    integrate_semiinf_origin(f, profile, OriginBehavior::LogSingularity, spec)
}

pub fn integrate_semiinf_origin<F>(f: F, profile: DecayProfile, origin: OriginBehavior, spec: &QuadSpec) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync,
{
    match try_integrate_semiinf(|x| Ok(f(x)), profile, origin, spec) {
        Ok(r) => r,
        Err(_) => QuadResult { value: f64::NAN, err_estimate: f64::INFINITY, evaluations: 0, converged: false, magnitude: f64::NAN },
    }
}

/// `∫₀^∞ h(τ) dτ` for an index integrand whose `e^{±πτ/2}` factors are already
/// folded in. `decay` must be declared; the upper limit never exceeds the
/// largest order the Macdonald evaluator accepts.
pub fn try_integrate_tau_index<F>(h: F, decay: Option<DecayProfile>, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let profile = decay.ok_or_else(|| Error::MissingDecay("index integrand".into()))?;
    profile.validate()?;
    let upper = profile.truncation(spec.log_cutoff()).min(TAU_HARD_CAP);
    de_engine(&h, Map::for_profile(&profile), OriginBehavior::Bounded.lower_cutoff(), upper, TAU_HARD_CAP, spec)
}

pub fn integrate_tau_index<F>(h: F, decay: Option<DecayProfile>, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_integrate_tau_index(|t| Ok(h(t)), decay, spec)
}

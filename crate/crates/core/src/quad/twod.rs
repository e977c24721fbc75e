use super::de::Map;
use super::{init_pool, DecayProfile, OriginBehavior, QuadResult, QuadSpec};
use crate::error::{Error, Result};
use rayon::prelude::*;

const H0: f64 = 0.5;

struct Axis {
    map: Map,
    j_lo: i64,
    j_hi: i64,
}

impl Axis {
    fn new(profile: DecayProfile, origin: OriginBehavior, spec: &QuadSpec) -> Result<Self> {
        profile.validate()?;
        let map = Map::for_profile(&profile);
        let j_lo = (map.t_of(origin.lower_cutoff()) / H0).floor() as i64;
        let j_hi = ((map.t_of(profile.truncation(spec.log_cutoff())) / H0).ceil() as i64).max(j_lo + 1);
        Ok(Axis { map, j_lo, j_hi })
    }

    /// Points and weights of the level-`k` grid.
    fn points(&self, level: usize) -> Vec<(f64, f64)> {
        let h = H0 / (1u64 << level) as f64;
        let n = ((self.j_hi - self.j_lo) as usize) << level;
        (0..=n).map(|i| self.map.point(self.j_lo as f64 * H0 + i as f64 * h)).collect()
    }
}

/// `∫₀^∞∫₀^∞ f(y, t) dy dt` by a tensor-product double-exponential rule.
///
/// The same rule is used on both axes, so for matching axis declarations the
/// result is symmetric, up to summation order, under swapping the arguments of `f`. Every
/// refinement level reuses all previous integrand values.
pub fn try_integrate_2d<F>(f: F, axes: [(DecayProfile, OriginBehavior); 2], spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    init_pool();
    let ax = Axis::new(axes[0].0, axes[0].1, spec)?;
    let at = Axis::new(axes[1].0, axes[1].1, spec)?;
    let mut raw = 0.0;
    let mut raw_abs = 0.0;
    let mut prev = f64::NAN;
    let mut err = f64::INFINITY;
    let mut evaluations = 0;
    for level in 0..=spec.max_refinements {
        let px = ax.points(level);
        let pt = at.points(level);
        let fresh_only = level > 0;
        let rows: Vec<(f64, f64, usize)> = px
            .par_iter()
            .enumerate()
            .map(|(i, &(x, wx))| -> Result<(f64, f64, usize)> {
                let (mut s, mut sa, mut n) = (0.0, 0.0, 0);
                if wx == 0.0 || x <= 0.0 || !x.is_finite() {
                    return Ok((0.0, 0.0, 0));
                }
                let all = !fresh_only || i % 2 == 1;
                for (j, &(t, wt)) in pt.iter().enumerate() {
                    if (!all && j % 2 == 0) || wt == 0.0 || t <= 0.0 || !t.is_finite() {
                        continue;
                    }
                    let v = f(x, t)?;
                    if v.is_nan() {
                        return Err(Error::Domain(format!("integrand returned NaN at ({x}, {t})")));
                    }
                    n += 1;
                    if v != 0.0 {
                        s += v * wx * wt;
                        sa += (v * wx * wt).abs();
                    }
                }
                Ok((s, sa, n))
            })
            .collect::<Result<_>>()?;
        for (s, sa, n) in rows {
            raw += s;
            raw_abs += sa;
            evaluations += n;
        }
        let h = H0 / (1u64 << level) as f64;
        let cur = h * h * raw;
        if level > 0 {
            err = (cur - prev).abs();
            if level >= 2 && err <= spec.tolerance_for(cur) {
                return Ok(QuadResult { value: cur, err_estimate: err, evaluations, converged: true, magnitude: h * h * raw_abs });
            }
        }
        prev = cur;
    }
    let h = H0 / (1u64 << spec.max_refinements) as f64;
    Ok(QuadResult { value: prev, err_estimate: err, evaluations, converged: false, magnitude: h * h * raw_abs })
}

/// `∫∫ f(y, t) dy dt` over the positive quadrant with a decay profile per axis.
pub fn integrate_2d<F>(f: F, profile_y: DecayProfile, profile_t: DecayProfile, spec: &QuadSpec) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let origin = OriginBehavior::LogSingularity;
    try_integrate_2d(|y, t| Ok(f(y, t)), [(profile_y, origin), (profile_t, origin)], spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_products() {
        let s = QuadSpec::two_dim();
        let p = DecayProfile::ExpDecay(1.0);
        let r = integrate_2d(|y: f64, t: f64| (-y - t).exp(), p, p, &s).unwrap();
        assert!(r.converged && (r.value - 1.0).abs() < 1e-9, "{r:?}");
        let r = integrate_2d(|y: f64, t: f64| y * t * (-y - t).exp(), p, p, &s).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn swapping_arguments_agrees_to_rounding() {
        let s = QuadSpec::two_dim();
        let p = DecayProfile::ExpDecay(1.0);
        let f = |y: f64, t: f64| (-y - 2.0 * t).exp() * (1.0 + y * t).ln();
        let a = integrate_2d(f, p, p, &s).unwrap().value;
        let b = integrate_2d(|y, t| f(t, y), p, p, &s).unwrap().value;
        assert!((a - b).abs() <= 1e-14 * a.abs());
    }

    #[test]
    fn non_separable_against_closed_form() {
        // ∫∫ e^{-(y+t)} / (1 + y + t) = ∫ s e^{-s}/(1+s) ds = 1 - e E₁(1)
        let e1 = 0.219_383_934_395_520_3;
        let want = 1.0 - std::f64::consts::E * e1;
        let p = DecayProfile::ExpDecay(1.0);
        let r = integrate_2d(|y: f64, t: f64| (-y - t).exp() / (1.0 + y + t), p, p, &QuadSpec::two_dim()).unwrap();
        assert!((r.value - want).abs() < 1e-8, "{r:?}");
    }
}

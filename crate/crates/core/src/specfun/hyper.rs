use super::{ComplexValue, POLE_TOLERANCE};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;

/// Parameters of a generalized hypergeometric series `pFq(top; bottom; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSeriesSpec {
    pub top: Vec<ComplexValue>,
    pub bottom: Vec<ComplexValue>,
    pub argument: ComplexValue,
    /// `Some(n)` when one top parameter equals `-n`, so the sum has `n + 1` terms.
    pub terminating_at: Option<usize>,
}

impl HypSeriesSpec {
    pub fn new(top: Vec<ComplexValue>, bottom: Vec<ComplexValue>, argument: ComplexValue) -> Self {
        Self { top, bottom, argument, terminating_at: None }
    }

    /// Real-parameter convenience constructor.
    pub fn real(top: &[f64], bottom: &[f64], argument: f64) -> Self {
        let c = |v: &[f64]| v.iter().map(|&x| ComplexValue::new(x, 0.0)).collect();
        Self::new(c(top), c(bottom), ComplexValue::new(argument, 0.0))
    }

    /// Marks the series as terminating after degree `n`.
    pub fn terminating(mut self, n: usize) -> Self {
        self.terminating_at = Some(n);
        self
    }

    fn ratio(&self, k: usize) -> Result<ComplexValue> {
        let kf = k as f64;
        let mut r = self.argument / (kf + 1.0);
        for a in &self.top {
            r *= a + kf;
        }
        for b in &self.bottom {
            let d = b + kf;
            if d.norm() < POLE_TOLERANCE {
                return Err(Error::Domain(format!(
                    "bottom parameter {b} hits a pole at index {k}"
                )));
            }
            r /= d;
        }
        Ok(r)
    }
}

/// Exact finite sum of a terminating `pFq`.
///
/// Terms are accumulated in natural order through the ratio recurrence
/// `t_{k+1} = t_k · Π(a+k)/Π(b+k) · z/(k+1)`.
pub fn hyp_terminating(spec: &HypSeriesSpec) -> Result<ComplexValue> {
    let n = spec
        .terminating_at
        .ok_or_else(|| Error::Domain("series is not marked terminating".into()))?;
    let target = -(n as f64);
    if !spec.top.iter().any(|a| (a.re - target).abs() < 1e-12 && a.im.abs() < 1e-12) {
        return Err(Error::Domain(format!("no top parameter equals -{n}")));
    }
    let mut term = ComplexValue::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        term *= spec.ratio(k)?;
        sum += term;
    }
    Ok(sum)
}

/// Converged value of a non-terminating `pFq`.
///
/// Supported: every `p ≤ q` (entire series) and Gauss `2F1` at real
/// `z ≤ 1/2`; for `z < 0` the Pfaff transformation
/// `2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))` is applied first.
pub fn hyp_series(spec: &HypSeriesSpec) -> Result<ComplexValue> {
    if spec.terminating_at.is_some() {
        return hyp_terminating(spec);
    }
    let (p, q) = (spec.top.len(), spec.bottom.len());
    let z = spec.argument;
    if p == 2 && q == 1 {
        if z.im != 0.0 || z.re > 0.5 {
            return Err(Error::Domain(format!("2F1 argument {z} outside z ≤ 1/2")));
        }
        if z.re < 0.0 {
            let (a, b, c) = (spec.top[0], spec.top[1], spec.bottom[0]);
            let w = z.re / (z.re - 1.0);
            let inner = HypSeriesSpec::new(vec![a, c - b], vec![c], ComplexValue::new(w, 0.0));
            let scale = (-a * (1.0 - z.re).ln()).exp();
            return Ok(scale * sum_series(&inner)?);
        }
        return sum_series(spec);
    }
    if p <= q {
        return sum_series(spec);
    }
    if p == q + 1 && z.norm() < 1.0 {
        return sum_series(spec);
    }
    Err(Error::Domain(format!("{p}F{q} at {z} is not supported")))
}

fn sum_series(spec: &HypSeriesSpec) -> Result<ComplexValue> {
    let mut term = ComplexValue::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        term *= spec.ratio(k)?;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            // past the peak once the ratio has dropped below one
            if quiet >= 3 && spec.ratio(k + 1)?.norm() < 1.0 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if term.norm() == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "hypergeometric series", value: sum.norm(), err: term.norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    /// Independent brute-force sum: every term from explicit Pochhammer products.
    fn brute_force(top: &[ComplexValue], bottom: &[ComplexValue], z: ComplexValue, n: usize) -> ComplexValue {
        let poch = |a: ComplexValue, k: usize| (0..k).fold(c(1.0, 0.0), |acc, j| acc * (a + j as f64));
        let mut sum = c(0.0, 0.0);
        let mut fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                fact *= k as f64;
            }
            let num = top.iter().fold(c(1.0, 0.0), |acc, &a| acc * poch(a, k));
            let den = bottom.iter().fold(c(1.0, 0.0), |acc, &b| acc * poch(b, k));
            sum += num / den * z.powu(k as u32) / fact;
        }
        sum
    }

    #[test]
    fn degree_zero_is_one() {
        let s = HypSeriesSpec::new(vec![c(0.0, 0.0), c(2.0, 3.0)], vec![c(0.5, 0.0)], c(7.0, 0.0)).terminating(0);
        assert_eq!(hyp_terminating(&s).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn two_term_gauss() {
        let (b, cc, z) = (2.5, 1.5, 0.3);
        let s = HypSeriesSpec::real(&[-1.0, b], &[cc], z).terminating(1);
        assert_relative_eq!(hyp_terminating(&s).unwrap().re, 1.0 - b * z / cc, max_relative = 1e-15);
    }

    #[test]
    fn wilson_type_4f3_matches_brute_force() {
        let (a, t, n) = (1.0, 0.0, 1usize);
        let top = vec![c(-(n as f64), 0.0), c(n as f64 + 3.0, 0.0), c(a, t), c(a, -t)];
        let bottom = vec![c(2.0, 0.0); 3];
        let s = HypSeriesSpec::new(top.clone(), bottom.clone(), c(1.0, 0.0)).terminating(n);
        let want = brute_force(&top, &bottom, c(1.0, 0.0), n);
        assert!((hyp_terminating(&s).unwrap() - want).norm() < 1e-15);
        // 1 + (-1)(4)(1)(1)/(2·2·2) = 1/2
        assert_relative_eq!(want.re, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn missing_negative_integer_rejected() {
        let s = HypSeriesSpec::real(&[1.0, 2.0], &[3.0], 0.5).terminating(2);
        assert!(hyp_terminating(&s).is_err());
    }

    #[test]
    fn bottom_pole_rejected() {
        let s = HypSeriesSpec::real(&[-3.0], &[-1.0], 0.5).terminating(3);
        assert!(hyp_terminating(&s).is_err());
    }

    #[test]
    fn gauss_log_identity() {
        for z in [-1.0, 0.4, -3.0, 0.0] {
            let s = HypSeriesSpec::real(&[1.0, 1.0], &[2.0], z);
            let want = if z == 0.0 { 1.0 } else { -(1.0 - z).ln() / z };
            assert_relative_eq!(hyp_series(&s).unwrap().re, want, max_relative = 1e-14);
        }
    }

    #[test]
    fn gauss_rejects_large_argument() {
        assert!(hyp_series(&HypSeriesSpec::real(&[1.0, 1.0], &[2.0], 0.7)).is_err());
    }

    #[test]
    fn zero_f_two_values() {
        let s = HypSeriesSpec::real(&[], &[1.5, 2.5], 0.0);
        assert_eq!(hyp_series(&s).unwrap(), c(1.0, 0.0));
        // with b=1 reduces to Σ z^k/(k!)^3
        let z: f64 = -1.0;
        let want: f64 = (0..30).map(|k| {
            let f: f64 = (1..=k).map(|j| j as f64).product();
            z.powi(k as i32) / (f * f * f)
        }).sum();
        let s = HypSeriesSpec::real(&[], &[1.0, 1.0], z);
        assert_relative_eq!(hyp_series(&s).unwrap().re, want, max_relative = 1e-14);
    }

    proptest! {
        #[test]
        fn terminating_sum_matches_brute_force(
            n in 0usize..=8,
            tops in proptest::collection::vec((0.1f64..3.0, -2.0f64..2.0), 0..3),
            bottoms in proptest::collection::vec(0.2f64..4.0, 1..4),
            z in -1.0f64..1.0,
        ) {
            let mut top = vec![c(-(n as f64), 0.0)];
            top.extend(tops.iter().map(|&(r, i)| c(r, i)));
            let bottom: Vec<_> = bottoms.iter().map(|&b| c(b, 0.0)).collect();
            let s = HypSeriesSpec::new(top.clone(), bottom.clone(), c(z, 0.0)).terminating(n);
            let got = hyp_terminating(&s).unwrap();
            let want = brute_force(&top, &bottom, c(z, 0.0), n);
            let scale = want.norm().max(1e-300);
            // scale by the largest term so cancellation does not make the check meaningless
            let mag = brute_force(&top.iter().map(|a| c(a.norm(), 0.0)).collect::<Vec<_>>(), &bottom, c(z.abs(), 0.0), n).norm();
            prop_assert!((got - want).norm() <= 1e-13 * scale.max(mag * 1e-3));
        }
    }
}

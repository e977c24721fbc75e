//! How each Gram entry is computed.

use super::{CaseId, OrthoCase, Route};
use crate::convolution::{
    conv_exp_omega, exp_power_moment, hat_power_moment, inner_spec, weighted_integral, ConvolutionKind,
};
use crate::error::{Error, Result};
use crate::families::{
    askey_poly, generated_image, generated_real_function, kl_image_closed, kl_image_integral, laguerre,
    orthonormal_from_moments, prudnikov_poly, ClosedForm, CoefficientTable, FamilySpec, ImageWeight, Side,
    INV_EXP_MIN_TAU,
};
use crate::kl::{kl_forward, RealFunction, TransformSpec};
use crate::quad::{try_integrate_semiinf, try_integrate_tau_index, DecayProfile, OriginBehavior, QuadSpec};
use crate::specfun::{besselk_real, ln_cosh, ln_gamma_abs_sq, ln_gamma_real, ln_sinh, rho_nu};
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

type Img = Box<dyn Fn(usize, f64) -> Result<f64> + Send + Sync>;
type Weight = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;
type Entry = Box<dyn Fn(usize, usize, &QuadSpec) -> Result<f64> + Send + Sync>;

/// Absolute error, in units of the scaled image `e^{πτ/2} F(τ)`, accepted from
/// a quadrature image that stalls at its rounding floor. Scaled images are
/// O(1) where the index integrals get their mass, and beyond that the weight
/// suppresses the stalled error far below the Gram tolerances.
const IMAGE_ABS_FLOOR: f64 = 1e-9;

/// A quadrature image, accepting a stalled result whose error is below [`IMAGE_ABS_FLOOR`].
fn lenient_image(r: Result<f64>, tau: f64) -> Result<f64> {
    match r {
        Err(Error::NonConvergence { value, err, .. }) if err <= IMAGE_ABS_FLOOR => Ok(value * (-0.5 * PI * tau).exp()),
        other => other,
    }
}

const ROUGH_DECAY: DecayProfile = DecayProfile::StretchedExpDecay { rate: 2.0, power: 0.5 };

/// `c ∫ w(τ) F_n(τ) G_m(τ) dτ`, with both image rows cached per node.
struct IndexPlan {
    weight: Weight,
    f: Img,
    g: Img,
    size: usize,
    rate: f64,
    cache: Mutex<HashMap<u64, Arc<(Vec<f64>, Vec<f64>)>>>,
}

impl IndexPlan {
    fn new(weight: Weight, f: Img, g: Img, size: usize, rate: f64) -> Self {
        Self { weight, f, g, size, rate, cache: Mutex::new(HashMap::new()) }
    }

    fn images(&self, tau: f64) -> Result<Arc<(Vec<f64>, Vec<f64>)>> {
        if let Some(v) = self.cache.lock().expect("image cache").get(&tau.to_bits()) {
            return Ok(v.clone());
        }
        let f = (0..self.size).map(|n| (self.f)(n, tau)).collect::<Result<Vec<_>>>()?;
        let g = (0..self.size).map(|m| (self.g)(m, tau)).collect::<Result<Vec<_>>>()?;
        let v = Arc::new((f, g));
        self.cache.lock().expect("image cache").insert(tau.to_bits(), v.clone());
        Ok(v)
    }

    fn entry(&self, n: usize, m: usize, quad: &QuadSpec) -> Result<f64> {
        let h = |tau: f64| {
            let w = (self.weight)(tau)?;
            if w == 0.0 {
                return Ok(0.0);
            }
            let im = self.images(tau)?;
            Ok(w * im.0[n] * im.1[m])
        };
        try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(self.rate)), quad)?.require_to_rounding("index-side Gram entry")
    }
}

enum Plan {
    Index(IndexPlan),
    /// Independent entries; `symmetric` ones are computed for `n ≤ m` and mirrored.
    Direct { entry: Entry, symmetric: bool },
    /// Triple integrals, run concurrently.
    Nested(Entry),
}

/// Quadrature settings for an entry whose natural size is `scale`.
fn entry_quad(quad: &QuadSpec, scale: f64) -> QuadSpec {
    let abs_tol = if scale.is_finite() && scale > 0.0 { (quad.rel_tol * scale).clamp(1e-300, 0.5) } else { quad.abs_tol };
    QuadSpec { abs_tol, ..*quad }
}

/// Every entry of the `size × size` matrix, in row-major order.
pub(super) fn entries(case: &OrthoCase, size: usize, expected: &[f64]) -> Result<Vec<((usize, usize), Result<f64>)>> {
    let plan = plan(case, size)?;
    let scale = |n: usize, m: usize| (expected[n] * expected[m]).abs().sqrt();
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|n| (0..size).map(move |m| (n, m))).collect();
    let quad = &case.quad;
    Ok(match plan {
        Plan::Index(p) => pairs.into_iter().map(|(n, m)| ((n, m), p.entry(n, m, &entry_quad(quad, scale(n, m))))).collect(),
        Plan::Direct { entry, symmetric } => {
            let mut done: HashMap<(usize, usize), Result<f64>> = HashMap::new();
            for &(n, m) in &pairs {
                if symmetric && n > m {
                    continue;
                }
                done.insert((n, m), entry(n, m, &entry_quad(quad, scale(n, m))));
            }
            pairs
                .into_iter()
                .map(|(n, m)| {
                    let key = if symmetric && n > m { (m, n) } else { (n, m) };
                    let v = match &done[&key] {
                        Ok(v) => Ok(*v),
                        Err(e) => Err(e.clone()),
                    };
                    ((n, m), v)
                })
                .collect()
        }
        Plan::Nested(entry) => {
            crate::quad::init_pool();
            pairs.into_par_iter().map(|(n, m)| ((n, m), entry(n, m, &entry_quad(quad, scale(n, m))))).collect()
        }
    })
}

fn no_alternate(id: CaseId) -> Error {
    Error::Domain(format!("{id} has no alternate route"))
}

/// `τ sinh(πτ) e^{ln_extra}` without overflow.
fn tau_sinh_exp(tau: f64, ln_extra: f64) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    (tau.ln() + ln_sinh(PI * tau) + ln_extra).exp()
}

/// The coefficient table of a Prudnikov case: the injected one, or one
/// generated from the moments of its weight.
#[derive(Clone, Copy)]
enum TableKind {
    /// Weight `x^α ρ_ν`.
    P,
    /// Weight `e^{-x} ρ_ν`.
    Q,
    /// Weight `e^{-1/x} ρ_ν / x`.
    SmallQ,
}

/// The table a Prudnikov case reads: injected, or generated with `rows` rows.
pub(super) fn case_table(case: &OrthoCase, rows: usize) -> Result<Arc<CoefficientTable>> {
    let kind = match case.id {
        CaseId::PrudnikovP | CaseId::PrudnikovIndexP => TableKind::P,
        CaseId::PrudnikovQ | CaseId::PrudnikovIndexQ => TableKind::Q,
        CaseId::PrudnikovSmallQ | CaseId::PrudnikovIndexSmallQ => TableKind::SmallQ,
        other => return Err(Error::Domain(format!("{other} uses no coefficient table"))),
    };
    table(case, kind, rows)
}

fn table(case: &OrthoCase, kind: TableKind, size: usize) -> Result<Arc<CoefficientTable>> {
    if let Some(t) = &case.coeffs {
        return Ok(t.clone());
    }
    Ok(Arc::new(generated_table(kind, case.p("nu"), case.params.get("alpha").copied().unwrap_or(0.0), size)?))
}

/// Monomial coefficients orthonormal under the weight of `kind`, from its moments.
fn generated_table(kind: TableKind, nu: f64, alpha: f64, rows: usize) -> Result<CoefficientTable> {
    let count = 2 * rows - 1;
    let moments: Vec<f64> = match kind {
        TableKind::P => (0..count)
            .map(|k| {
                let s = alpha + k as f64 + 1.0;
                Ok((ln_gamma_real(s)? + ln_gamma_real(s + nu)?).exp())
            })
            .collect::<Result<_>>()?,
        TableKind::Q | TableKind::SmallQ => {
            let quad = QuadSpec { abs_tol: 1e-30, rel_tol: 1e-14, max_refinements: 12, truncation_margin: 20.0 };
            (0..count)
                .map(|k| {
                    let p = k as f64;
                    let f = |x: f64| -> Result<f64> {
                        let w = match kind {
                            TableKind::Q => (-x).exp() * x.powf(p),
                            _ => (-1.0 / x).exp() * x.powf(p - 1.0),
                        };
                        if w == 0.0 {
                            return Ok(0.0);
                        }
                        Ok(w * rho_nu(nu, x)?)
                    };
                    let decay = match kind {
                        TableKind::Q => DecayProfile::ExpDecay(1.0),
                        _ => ROUGH_DECAY,
                    };
                    try_integrate_semiinf(f, decay, OriginBehavior::Bounded, &quad)?.require_to_rounding("weight moment")
                })
                .collect::<Result<_>>()?
        }
    };
    let name = match kind {
        TableKind::P => "P",
        TableKind::Q => "Q",
        TableKind::SmallQ => "q",
    };
    orthonormal_from_moments(name, &moments, rows)
}

/// A direct `x`-space Gram entry `∫ w(x) p_n(x) p_m(x) dx` with `p` from a table.
fn direct_table_entry(
    t: Arc<CoefficientTable>,
    weight: impl Fn(f64) -> Result<f64> + Send + Sync + 'static,
    decay: DecayProfile,
) -> Entry {
    Box::new(move |n, m, quad| {
        let (rn, rm) = (t.row(n)?.to_vec(), t.row(m)?.to_vec());
        let horner = |r: &[f64], x: f64| r.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let h = |x: f64| {
            let w = weight(x)?;
            if w == 0.0 {
                return Ok(0.0);
            }
            Ok(w * horner(&rn, x) * horner(&rm, x))
        };
        try_integrate_semiinf(h, decay, OriginBehavior::Bounded, quad)?.require_to_rounding("Gram entry")
    })
}

/// Image through `kl_forward` of a generated function family member.
fn generated_image_by_quadrature(family: FamilySpec, spec: TransformSpec, quad: QuadSpec) -> Img {
    Box::new(move |n, tau| {
        let f = generated_real_function(&family, n)?;
        lenient_image(kl_forward(&f, tau, &spec, &quad), tau)
    })
}

fn plan(case: &OrthoCase, size: usize) -> Result<Plan> {
    use CaseId::*;
    let alt = case.route == Route::Alternate;
    let p = |k: &str| case.p(k);
    // images are 1-D integrals, so they keep the full refinement budget
    let inner = QuadSpec { abs_tol: 0.1 * case.quad.abs_tol, rel_tol: 0.1 * case.quad.rel_tol, ..case.quad };
    Ok(match case.id {
        Laguerre => {
            let alpha = p("alpha");
            let origin = if alpha < 0.0 { OriginBehavior::PowerSingularity(alpha) } else { OriginBehavior::Bounded };
            if alt {
                return Err(no_alternate(case.id));
            }
            Plan::Direct {
                symmetric: true,
                entry: Box::new(move |n, m, quad| {
                    let h = |x: f64| Ok(x.powf(alpha) * (-x).exp() * laguerre(n, alpha, x)? * laguerre(m, alpha, x)?);
                    try_integrate_semiinf(h, DecayProfile::ExpDecay(1.0), origin, quad)?.require_to_rounding("Laguerre Gram entry")
                }),
            }
        }
        LaguerreIndex => {
            let (beta, gamma, mu) = (p("beta"), p("gamma"), p("mu"));
            let alpha = beta + gamma + 1.0;
            let f: Img = if alt {
                let w = ImageWeight::Laguerre { alpha, beta, mu, eta: mu };
                Box::new(move |n, tau| lenient_image(kl_image_integral(&w, n, tau, &inner), tau))
            } else {
                let form = ClosedForm::LaguerreMatched { alpha, beta, mu };
                Box::new(move |n, tau| kl_image_closed(&form, n, tau))
            };
            let g: Img = if !alt && mu == 0.5 {
                let form = ClosedForm::LaguerreMatched { alpha, beta: gamma, mu };
                Box::new(move |m, tau| kl_image_closed(&form, m, tau))
            } else if !alt && mu == 1.0 {
                let form = ClosedForm::LaguerreBare { alpha, gamma };
                Box::new(move |m, tau| kl_image_closed(&form, m, tau))
            } else {
                let w = ImageWeight::Laguerre { alpha, beta: gamma, mu: 1.0 - mu, eta: mu };
                Box::new(move |m, tau| lenient_image(kl_image_integral(&w, m, tau, &inner), tau))
            };
            Plan::Index(IndexPlan::new(Box::new(|tau| Ok(tau_sinh_exp(tau, 0.0))), f, g, size, 0.5 * PI))
        }
        LaguerreSqrtIndex => {
            let (beta, gamma, mu, eta) = (p("beta"), p("gamma"), p("mu"), p("eta"));
            let alpha = beta + gamma + 1.0;
            let wf = ImageWeight::LaguerreSqrt { alpha, beta, mu, eta };
            let f: Img = Box::new(move |n, tau| lenient_image(kl_image_integral(&wf, n, tau, &inner), tau));
            let g: Img = if !alt && mu == 1.0 {
                let form = ClosedForm::LaguerreSqrtBare { alpha, gamma, eta };
                Box::new(move |m, tau| kl_image_closed(&form, m, tau))
            } else {
                let w = ImageWeight::LaguerreSqrt { alpha, beta: gamma, mu: 1.0 - mu, eta };
                Box::new(move |m, tau| lenient_image(kl_image_integral(&w, m, tau, &inner), tau))
            };
            Plan::Index(IndexPlan::new(Box::new(|tau| Ok(tau_sinh_exp(tau, 0.0))), f, g, size, 0.25 * PI))
        }
        CdhHalf => {
            if alt {
                return Err(no_alternate(case.id));
            }
            let (a, b) = (p("beta") + 1.0, p("gamma") + 1.0);
            let fam = FamilySpec::ContinuousDualHahn { a, b, c: 0.5 };
            Plan::Direct {
                symmetric: true,
                entry: Box::new(move |n, m, quad| {
                    let h = |t: f64| {
                        if t <= 0.0 {
                            return Ok(0.0);
                        }
                        let ln = ln_gamma_abs_sq(a, t)? + ln_gamma_abs_sq(b, t)? - PI.ln();
                        Ok(tau_sinh_exp(t, ln) * askey_poly(&fam, n, t)? * askey_poly(&fam, m, t)?)
                    };
                    try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?
                        .require_to_rounding("continuous dual Hahn Gram entry")
                }),
            }
        }
        CdhIndex => {
            let (a, b, c) = (p("a"), p("b"), p("c"));
            let fam = FamilySpec::CdhPower { side: Side::F, a, b, c };
            let (f, g): (Img, Img) = if alt {
                (
                    generated_image_by_quadrature(fam.clone(), TransformSpec::hat(), inner),
                    generated_image_by_quadrature(fam.with_side(Side::G), TransformSpec::hat(), inner),
                )
            } else {
                let gf = fam.with_side(Side::G);
                (Box::new(move |n, t| generated_image(&fam, n, t)), Box::new(move |m, t| generated_image(&gf, m, t)))
            };
            let weight: Weight = Box::new(move |t| Ok(tau_sinh_exp(t, ln_gamma_abs_sq(c, 0.5 * t)? - 2.0 * PI.ln())));
            Plan::Index(IndexPlan::new(weight, f, g, size, 0.5 * PI))
        }
        WilsonIndex => {
            let (a, b, c, d) = (p("a"), p("b"), p("c"), p("d"));
            if alt {
                let fam = FamilySpec::WilsonPower { side: Side::F, a, b, c, d };
                let f = generated_image_by_quadrature(fam.clone(), TransformSpec::hat(), inner);
                let g = generated_image_by_quadrature(fam.with_side(Side::G), TransformSpec::hat(), inner);
                let weight: Weight = Box::new(move |t| {
                    Ok(tau_sinh_exp(t, ln_gamma_abs_sq(c, 0.5 * t)? + ln_gamma_abs_sq(d, 0.5 * t)? - 2.0 * PI.ln()))
                });
                Plan::Index(IndexPlan::new(weight, f, g, size, 0.5 * PI))
            } else {
                let fam = FamilySpec::Wilson { a, b, c, d };
                Plan::Direct {
                    symmetric: true,
                    entry: Box::new(move |n, m, quad| {
                        let h = |t: f64| {
                            if t <= 0.0 {
                                return Ok(0.0);
                            }
                            let s = 0.5 * t;
                            let ln = ln_gamma_abs_sq(a, s)? + ln_gamma_abs_sq(b, s)? + ln_gamma_abs_sq(c, s)?
                                + ln_gamma_abs_sq(d, s)?
                                - 2.0 * PI.ln();
                            Ok(tau_sinh_exp(t, ln) * askey_poly(&fam, n, s)? * askey_poly(&fam, m, s)?)
                        };
                        try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?
                            .require_to_rounding("Wilson Gram entry")
                    }),
                }
            }
        }
        CdhExpIndex | WilsonExpIndex => {
            let (a, b, c) = (p("a"), p("b"), p("c"));
            let d = case.params.get("d").copied();
            let fam = match d {
                Some(d) => FamilySpec::WilsonExp { side: Side::F, a, b, c, d },
                None => FamilySpec::CdhExp { side: Side::F, a, b, c },
            };
            let gf = fam.with_side(Side::G);
            let (f, g): (Img, Img) = if alt {
                (
                    generated_image_by_quadrature(fam, TransformSpec::default(), inner),
                    generated_image_by_quadrature(gf, TransformSpec::default(), inner),
                )
            } else {
                (Box::new(move |n, t| generated_image(&fam, n, t)), Box::new(move |m, t| generated_image(&gf, m, t)))
            };
            let lg_half_c = ln_gamma_real(0.5 - c)?;
            let lg_d = match d {
                Some(d) => Some((d, ln_gamma_real(d + 0.5)?)),
                None => None,
            };
            // 2/π² · τ sinh(πτ) · q(τ), with q in closed form
            let weight: Weight = Box::new(move |t| {
                let mut ln_q = ln_cosh(PI * t) - c * 2f64.ln() - 0.5 * PI.ln() + ln_gamma_abs_sq(c, t)? + lg_half_c;
                if let Some((d, lg)) = lg_d {
                    ln_q += 0.5 * PI.ln() - d * 2f64.ln() + ln_gamma_abs_sq(d, t)? - lg;
                }
                Ok(tau_sinh_exp(t, ln_q + 2f64.ln() - 2.0 * PI.ln()))
            });
            Plan::Index(IndexPlan::new(weight, f, g, size, 0.5 * PI))
        }
        CdhHatConv | CdhExpConv | WilsonHatConv | WilsonExpConv => {
            if alt {
                return Err(no_alternate(case.id));
            }
            let (a, b, c) = (p("a"), p("b"), p("c"));
            let d = case.params.get("d").copied().unwrap_or(0.0);
            let fam = match case.id {
                CdhHatConv => FamilySpec::CdhPower { side: Side::F, a, b, c },
                CdhExpConv => FamilySpec::CdhExp { side: Side::F, a, b, c },
                WilsonHatConv => FamilySpec::WilsonPower { side: Side::F, a, b, c, d },
                _ => FamilySpec::WilsonExp { side: Side::F, a, b, c, d },
            };
            let id = case.id;
            Plan::Nested(Box::new(move |n, m, quad| {
                let f = generated_real_function(&fam, n)?;
                let g = generated_real_function(&fam.with_side(Side::G), m)?;
                match id {
                    CdhHatConv => hat_power_moment(&f, &g, c, quad),
                    CdhExpConv => exp_power_moment(&f, &g, c, quad),
                    WilsonHatConv => {
                        let (nu, e) = ((c - d).abs(), 0.5 * (c + d));
                        let omega = RealFunction::new(
                            move |x| besselk_real(nu, 2.0 * x.sqrt()).unwrap_or(f64::NAN) * x.powf(e),
                            ROUGH_DECAY,
                            OriginBehavior::Bounded,
                        );
                        weighted_integral(&f, &g, &omega, ConvolutionKind::Hat, quad)
                    }
                    _ => {
                        let omega = conv_exp_omega(c, d, inner_spec(quad));
                        weighted_integral(&f, &g, &omega, ConvolutionKind::Standard, quad)
                    }
                }
            }))
        }
        PrudnikovP | PrudnikovQ | PrudnikovSmallQ => {
            if alt {
                return Err(no_alternate(case.id));
            }
            let nu = p("nu");
            let entry = match case.id {
                PrudnikovP => {
                    let alpha = p("alpha");
                    direct_table_entry(table(case, TableKind::P, size)?, move |x| Ok(x.powf(alpha) * rho_nu(nu, x)?), ROUGH_DECAY)
                }
                PrudnikovQ => direct_table_entry(
                    table(case, TableKind::Q, size)?,
                    move |x| Ok((-x).exp() * rho_nu(nu, x)?),
                    DecayProfile::ExpDecay(1.0),
                ),
                _ => direct_table_entry(
                    table(case, TableKind::SmallQ, size)?,
                    move |x| {
                        let w = (-1.0 / x).exp() / x;
                        if w == 0.0 {
                            return Ok(0.0);
                        }
                        Ok(w * rho_nu(nu, x)?)
                    },
                    ROUGH_DECAY,
                ),
            };
            Plan::Direct { entry, symmetric: true }
        }
        PrudnikovIndexP => {
            if alt {
                return Err(no_alternate(case.id));
            }
            let (nu, alpha) = (p("nu"), p("alpha"));
            let t = table(case, TableKind::P, size)?;
            let s39 = FamilySpec::PrudnikovS39 { nu, alpha, coeffs: t.clone() };
            let u310 = FamilySpec::PrudnikovU310 { nu, alpha, coeffs: t };
            Plan::Direct {
                symmetric: false,
                entry: Box::new(move |n, m, quad| {
                    let h = |tau: f64| {
                        if tau <= 0.0 {
                            return Ok(0.0);
                        }
                        let ln = 2.0 * tau.ln() + ln_gamma_abs_sq(nu + alpha, tau)? + ln_gamma_abs_sq(alpha, tau)?
                            + ln_cosh(PI * tau)
                            - PI.ln();
                        Ok(ln.exp() * prudnikov_poly(&s39, n, tau)? * prudnikov_poly(&u310, m, tau)?)
                    };
                    try_integrate_tau_index(h, Some(DecayProfile::IndexDecay(0.5 * PI)), quad)?
                        .require_to_rounding("Prudnikov index Gram entry")
                }),
            }
        }
        PrudnikovIndexQ => {
            let nu = p("nu");
            let t = table(case, TableKind::Q, size)?;
            let wf = ImageWeight::QExp { nu, coeffs: t.clone() };
            let f: Img = Box::new(move |n, tau| lenient_image(kl_image_integral(&wf, n, tau, &inner), tau));
            let g: Img = if alt {
                let w = ImageWeight::QBessel { nu, coeffs: t };
                Box::new(move |m, tau| lenient_image(kl_image_integral(&w, m, tau, &inner), tau))
            } else {
                let form = ClosedForm::QBessel { nu, coeffs: t };
                Box::new(move |m, tau| kl_image_closed(&form, m, tau))
            };
            Plan::Index(IndexPlan::new(Box::new(|tau| Ok(tau_sinh_exp(tau, 0.0))), f, g, size, 0.5 * PI))
        }
        PrudnikovIndexSmallQ => {
            let nu = p("nu");
            let t = table(case, TableKind::SmallQ, size)?;
            let (wf, wg) = (ImageWeight::QInvExp { coeffs: t.clone() }, ImageWeight::QRho { nu, coeffs: t.clone() });
            let (cf, cg) = (ClosedForm::QInvExp { coeffs: t.clone() }, ClosedForm::QRho { nu, coeffs: t });
            let f: Img = Box::new(move |n, tau| {
                if alt || tau < INV_EXP_MIN_TAU {
                    lenient_image(kl_image_integral(&wf, n, tau, &inner), tau)
                } else {
                    kl_image_closed(&cf, n, tau)
                }
            });
            let g: Img = Box::new(move |m, tau| if alt { lenient_image(kl_image_integral(&wg, m, tau, &inner), tau) } else { kl_image_closed(&cg, m, tau) });
            Plan::Index(IndexPlan::new(Box::new(|tau| Ok(tau_sinh_exp(tau, 0.0))), f, g, size, 0.5 * PI))
        }
        DOrthEvenV | DOrthEvenS | DOrthOddV | DOrthOddS => {
            return Err(Error::Domain(format!("{} is a d-orthogonality case; use d_orth_check", case.id)))
        }
    })
}

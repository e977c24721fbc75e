//! Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.

use klortho::convolution::{
    convolve, factorization_residual, kernel_bound, kernel_exact, kernel_index_integral, parseval_type_eval, ConvolutionKind,
};
use klortho::families::{askey_poly, kl_image_closed, kl_image_integral, ClosedForm, FamilySpec, ImageWeight};
use klortho::kl::{cosine_reciprocity, kl_forward, parseval_residual, weight_q, RealFunction, TransformSpec, WeightVariant};
use klortho::ortho::{gram_matrix, verify_case, CaseId, OrthoCase};
use klortho::quad::{try_integrate_finite_gaps, try_integrate_semiinf, DecayProfile, OriginBehavior, QuadSpec};
use klortho::specfun::{
    besselk_imag, besselk_imag_xscaled, besselk_real, gamma_abs_sq, ln_gamma_real, rho_nu,
};
use std::f64::consts::PI;
use std::time::Instant;

type Check = Result<(bool, String), String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn gamma(x: f64) -> f64 {
    ln_gamma_real(x).unwrap().exp()
}

fn err(e: klortho::Error) -> String {
    e.to_string()
}

fn reciprocity() -> Check {
    let quad = QuadSpec::default();
    let mut worst = 0f64;
    for x in [0.5, 1.0, 2.0] {
        for u in [0.0f64, 0.5, 1.0, 2.0] {
            let v = cosine_reciprocity(x, u, &quad).map_err(err)?;
            worst = worst.max((v - (-x * u.cosh()).exp()).abs());
        }
    }
    Ok((worst <= 1e-6, format!("max residual {worst:.2e}")))
}

fn uniform_bound() -> Check {
    let mut worst = 0f64;
    for delta in [0.0, PI / 4.0, 3.0 * PI / 8.0] {
        for tau in [0.5, 1.0, 5.0, 10.0] {
            for x in [0.5f64, 1.0, 2.0] {
                let k = besselk_imag(tau, x, false).map_err(err)?.abs();
                let bound = (-delta * tau).exp() * besselk_real(0.0, x * delta.cos()).map_err(err)?;
                worst = worst.max(k / bound);
            }
        }
    }
    Ok((worst <= 1.0 + 1e-10, format!("max |K|/bound {worst:.6}")))
}

fn eigenfunction() -> Check {
    let h = 1e-3;
    let mut worst = 0f64;
    for (x, tau) in [(0.8f64, 1.0f64), (1.5, 3.0)] {
        let k = |y: f64| besselk_imag(tau, y, false);
        let (km, k0, kp) = (k(x - h).map_err(err)?, k(x).map_err(err)?, k(x + h).map_err(err)?);
        let d1 = (kp - km) / (2.0 * h);
        let d2 = (kp - 2.0 * k0 + km) / (h * h);
        // x² K - x d/dx (x dK/dx) = τ² K
        let lhs = x * x * k0 - x * d1 - x * x * d2;
        worst = worst.max(rel(lhs, tau * tau * k0));
    }
    Ok((worst <= 1e-4, format!("max relative residual {worst:.2e}")))
}

/// `∫₀^∞ x^{s-1} e^{μx} K_{iτ}(μx) dx` for `0 < s < 1/2`: quadrature on `(0, A]`
/// and the asymptotic series of `e^y K_{iτ}(y)` beyond.
fn growing_mellin(s: f64, mu: f64, tau: f64, quad: &QuadSpec) -> Result<f64, String> {
    let a = 150.0 / mu;
    let f = |x: f64, from_zero: f64, _: f64| Ok(from_zero.powf(s - 1.0) * besselk_imag_xscaled(tau, mu * x)?);
    let head = try_integrate_finite_gaps(f, 0.0, a, quad).map_err(err)?.require("finite part").map_err(err)?;
    // e^y K_{iτ}(y) ~ √(π/2y) Σ_k c_k y^{-k}, c_k = Π_{j≤k} (-4τ² - (2j-1)²) / (k! 8^k)
    let y0 = mu * a;
    let (mut c, mut tail) = (1.0, 0.0);
    for k in 0..40 {
        if k > 0 {
            let j = k as f64;
            c *= (-4.0 * tau * tau - (2.0 * j - 1.0).powi(2)) / (8.0 * j);
        }
        let term = c * y0.powf(s - 0.5 - k as f64) / (k as f64 + 0.5 - s);
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
    }
    Ok(head + (0.5 * PI).sqrt() * mu.powf(-s) * tail)
}

fn mellin_closed_forms() -> Check {
    let quad = QuadSpec::with_tolerances(1e-15, 1e-12);
    let mut worst: [f64; 5] = [0.0; 5];
    let power = |s: f64, rate: f64| {
        let origin = if s == 1.0 { OriginBehavior::Bounded } else { OriginBehavior::PowerSingularity(s - 1.0) };
        let decay = if rate > 0.0 { DecayProfile::ExpDecay(rate) } else { DecayProfile::NoDecay };
        RealFunction::new(move |x: f64| x.powf(s - 1.0) * (-rate * x).exp(), decay, origin)
    };
    for s in [0.7, 1.0, 1.6] {
        for mu in [0.5, 1.0] {
            for tau in [0.0, 1.0, 2.5] {
                let got = kl_forward(&power(s, mu), tau, &TransformSpec { alpha: mu, beta: 1.0 }, &quad).map_err(err)?;
                let want = PI.sqrt() / (2.0 * mu).powf(s) * gamma_abs_sq(s, tau).map_err(err)? / gamma(s + 0.5);
                worst[0] = worst[0].max(rel(got, want));
            }
        }
    }
    for eta in [1.0, 2.0] {
        for s in [0.7, 1.0, 1.6] {
            for tau in [0.0, 1.0, 2.5] {
                let got = kl_forward(&power(s, 0.0), tau, &TransformSpec { alpha: eta, beta: 0.5 }, &quad).map_err(err)?;
                let want = eta.powf(-2.0 * s) * 2f64.powf(2.0 * s - 1.0) * gamma_abs_sq(s, 0.5 * tau).map_err(err)?;
                worst[1] = worst[1].max(rel(got, want));
            }
        }
    }
    for s in [0.2, 0.4] {
        for mu in [0.5, 1.0] {
            for tau in [0.0, 1.0, 2.5] {
                let got = growing_mellin(s, mu, tau, &quad)?;
                let want = (PI * tau).cosh() / (PI.sqrt() * (2.0 * mu).powf(s)) * gamma_abs_sq(s, tau).map_err(err)? * gamma(0.5 - s);
                worst[2] = worst[2].max(rel(got, want));
            }
        }
    }
    for s in [1.0, 1.5] {
        for nu in [0.3, 1.0] {
            for tau in [0.0, 1.0, 2.5] {
                let f = |x: f64| Ok(besselk_imag(tau, 2.0 * x.sqrt(), false)? * besselk_real(nu, 2.0 * x.sqrt())? * x.powf(s - 1.0));
                let origin = OriginBehavior::PowerSingularity(s - 1.0 - 0.5 * nu - 0.01);
                let got = try_integrate_semiinf(f, DecayProfile::SqrtExpDecay(4.0), origin, &quad)
                    .map_err(err)?
                    .require("product Mellin integral")
                    .map_err(err)?;
                let want = gamma_abs_sq(s + 0.5 * nu, 0.5 * tau).map_err(err)? * gamma_abs_sq(s - 0.5 * nu, 0.5 * tau).map_err(err)?
                    / (4.0 * gamma(2.0 * s));
                worst[3] = worst[3].max(rel(got, want));
            }
        }
    }
    let (s, a, b) = (0.5f64, 1.0f64, 1.0f64);
    let got = try_integrate_semiinf(
        |x: f64| Ok(x.powf(s - 1.0) * (-a * x - b / x).exp()),
        DecayProfile::ExpDecay(a),
        OriginBehavior::Bounded,
        &quad,
    )
    .map_err(err)?
    .require("exponential Mellin integral")
    .map_err(err)?;
    let want = 2.0 * (b / a).powf(0.5 * s) * besselk_real(s, 2.0 * (a * b).sqrt()).map_err(err)?;
    worst[4] = rel(got, want).max(rel(want, PI.sqrt() * (-2f64).exp()));
    let pass = worst.iter().all(|&w| w <= 1e-8);
    Ok((pass, format!("max rel err: damped {:.1e}, sqrt argument {:.1e}, growing {:.1e}, product {:.1e}, Bessel K {:.1e}", worst[0], worst[1], worst[2], worst[3], worst[4])))
}

fn parseval() -> Check {
    let f = RealFunction::exp_moment(0.0, 1.0);
    let (lhs, rhs) = parseval_residual(&f, &f, &TransformSpec::default(), &QuadSpec::default()).map_err(err)?;
    let e = (lhs - 0.25).abs().max((rhs - 0.25).abs());
    Ok((e <= 1e-7, format!("lhs {lhs:.12}, rhs {rhs:.12}")))
}

fn weight_of_x_exp() -> Check {
    let omega = RealFunction::exp_moment(1.0, 1.0);
    let mut worst = 0f64;
    for tau in [0.5, 1.0, 2.0] {
        let q = weight_q(&omega, tau, WeightVariant::Plain, &QuadSpec::default()).map_err(err)?;
        worst = worst.max((q - PI * tau / (PI * tau).sinh()).abs());
    }
    Ok((worst <= 1e-8, format!("max abs err {worst:.2e}")))
}

fn theorem_one() -> Check {
    let f = RealFunction::exp_moment(0.0, 1.0);
    let quad = QuadSpec::two_dim();
    let mut worst = 0f64;
    for tau in [0.5, 1.0, 2.0] {
        let (lhs, rhs) = factorization_residual(&f, &f, tau, &quad).map_err(err)?;
        worst = worst.max(rel(lhs, rhs));
    }
    for x in [1.0, 2.0] {
        let rep = parseval_type_eval(&f, &f, x, &quad).map_err(err)?;
        let direct = convolve(&f, &f, x, ConvolutionKind::Standard, &quad).map_err(err)?;
        worst = worst.max(rel(rep, direct));
    }
    Ok((worst <= 1e-5, format!("max relative disagreement {worst:.2e}")))
}

fn kernel_identity() -> Check {
    let quad = QuadSpec::default();
    let (mut worst, mut ratio) = (0f64, 0f64);
    for (x, y, t) in [(1.0, 1.0, 1.0), (0.5, 1.0, 2.0)] {
        let exact = kernel_exact(x, y, t);
        worst = worst.max((kernel_index_integral(x, y, t, &quad).map_err(err)? - exact).abs());
        for delta in [0.35 * PI, 0.45 * PI] {
            ratio = ratio.max(exact / kernel_bound(x, y, t, delta).map_err(err)?);
        }
    }
    Ok((worst <= 1e-7 && ratio <= 1.0, format!("identity residual {worst:.2e}, max kernel/bound {ratio:.3}")))
}

fn gram(case: OrthoCase, n: usize, tol_off: f64, tol_diag: f64) -> Result<(bool, f64, f64), String> {
    let r = verify_case(&case, n, tol_off, tol_diag).map_err(err)?;
    Ok((r.pass, r.max_offdiag_rel, r.max_diag_rel_err))
}

fn laguerre() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for alpha in [0.0, 0.5] {
        let case = OrthoCase::new(CaseId::Laguerre).with_param("alpha", alpha).map_err(err)?;
        let (ok, off, diag) = gram(case, 6, 1e-10, 1e-10)?;
        pass &= ok;
        detail.push(format!("α={alpha}: off {off:.1e}, diag {diag:.1e}"));
    }
    Ok((pass, detail.join("; ")))
}

fn continuous_dual_hahn() -> Check {
    let r = verify_case(&OrthoCase::new(CaseId::CdhHalf), 4, 1e-6, 1e-6).map_err(err)?;
    let first = rel(r.matrix[0][0], PI / 8.0);
    Ok((r.pass && first <= 1e-6, format!("off {:.1e}, diag {:.1e}, G00 - π/8 rel {first:.1e}", r.max_offdiag_rel, r.max_diag_rel_err)))
}

fn generated_laguerre() -> Check {
    let case = OrthoCase::new(CaseId::LaguerreIndex);
    let r = verify_case(&case, 4, 1e-6, 1e-6).map_err(err)?;
    // (π²/(2 n!)) Γ(n+2) with α = 1
    let mut worst = 0f64;
    for n in 0..4 {
        let want = PI * PI / 2.0 * (n as f64 + 1.0);
        worst = worst.max(rel(r.matrix[n][n], want));
    }
    Ok((r.pass && worst <= 1e-6, format!("off {:.1e}, diag {worst:.1e}", r.max_offdiag_rel)))
}

fn route_equivalence() -> Check {
    let quad = QuadSpec::with_tolerances(1e-15, 1e-12);
    let taus = [0.3, 1.0, 2.5];
    let mut worst = [0f64; 3];
    let mut compare = |slot: usize, form: &ClosedForm, weight: &ImageWeight| -> Result<(), String> {
        for n in 0..=3 {
            for &tau in &taus {
                let a = kl_image_closed(form, n, tau).map_err(err)?;
                let b = kl_image_integral(weight, n, tau, &quad).map_err(err)?;
                worst[slot] = worst[slot].max(rel(b, a));
            }
        }
        Ok(())
    };
    for (beta, gamma, mu) in [(0.0, 0.0, 0.5), (0.2, 0.3, 0.5), (0.2, 0.3, 0.8)] {
        let alpha = beta + gamma + 1.0;
        compare(0, &ClosedForm::LaguerreMatched { alpha, beta, mu }, &ImageWeight::Laguerre { alpha, beta, mu, eta: mu })?;
    }
    for (alpha, gamma) in [(1.0, 0.0), (1.5, 0.3)] {
        compare(1, &ClosedForm::LaguerreBare { alpha, gamma }, &ImageWeight::Laguerre { alpha, beta: gamma, mu: 0.0, eta: 1.0 })?;
    }
    for (alpha, gamma, eta) in [(1.0, 0.0, 2.0), (1.5, 0.3, 1.0)] {
        compare(
            2,
            &ClosedForm::LaguerreSqrtBare { alpha, gamma, eta },
            &ImageWeight::LaguerreSqrt { alpha, beta: gamma, mu: 0.0, eta },
        )?;
    }
    let pass = worst.iter().all(|&w| w <= 1e-7);
    Ok((pass, format!("max rel err: matched {:.1e}, bare {:.1e}, square root {:.1e}", worst[0], worst[1], worst[2])))
}

fn convolution_orthogonality() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for id in [CaseId::CdhHatConv, CaseId::CdhExpConv] {
        let case = OrthoCase::new(id);
        let (ok, off, diag) = gram(case, 2, 1e-4, 1e-4)?;
        pass &= ok;
        detail.push(format!("{id}: off {off:.1e}, diag {diag:.1e}"));
    }
    Ok((pass, detail.join("; ")))
}

fn d_orthogonality() -> Check {
    let mut detail = Vec::new();
    let mut pass = true;
    for id in [CaseId::DOrthEvenV, CaseId::DOrthEvenS, CaseId::DOrthOddV, CaseId::DOrthOddS] {
        let r = gram_matrix(&OrthoCase::new(id), 2).map_err(err)?;
        pass &= r.errors.is_empty() && r.max_offdiag_rel <= 1e-6 && r.max_diag_rel_err <= 1e-8;
        detail.push(format!("{id} τ {:.0e} x {:.0e}", r.max_offdiag_rel, r.max_diag_rel_err));
    }
    Ok((pass, detail.join("; ")))
}

fn permutations(p: [f64; 4]) -> Vec<[f64; 4]> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut seen = [i, j, k, l];
                    seen.sort_unstable();
                    if seen == [0, 1, 2, 3] {
                        out.push([p[i], p[j], p[k], p[l]]);
                    }
                }
            }
        }
    }
    out
}

fn wilson_symmetry() -> Check {
    let base = [1.0, 0.5, 0.7, 1.2];
    let perms = permutations(base);
    let mut worst = 0f64;
    for n in 0..=3 {
        for t in [0.0, 0.4, 0.9, 2.5] {
            let w = |p: [f64; 4]| askey_poly(&FamilySpec::Wilson { a: p[0], b: p[1], c: p[2], d: p[3] }, n, t);
            let reference = w(base).map_err(err)?;
            for p in &perms {
                worst = worst.max(rel(w(*p).map_err(err)?, reference));
            }
        }
    }
    Ok((perms.len() == 24 && worst <= 1e-12, format!("{} permutations, max rel spread {worst:.1e}", perms.len())))
}

fn rho_moments() -> Check {
    let quad = QuadSpec::with_tolerances(1e-15, 1e-12);
    let mut worst = 0f64;
    for (nu, s) in [(0.5f64, 1.0f64), (1.0, 1.5)] {
        let origin = if s == 1.0 { OriginBehavior::Bounded } else { OriginBehavior::PowerSingularity(s - 1.0) };
        let got = try_integrate_semiinf(|x| Ok(rho_nu(nu, x)? * x.powf(s - 1.0)), DecayProfile::SqrtExpDecay(2.0), origin, &quad)
            .map_err(err)?
            .require("moment")
            .map_err(err)?;
        worst = worst.max(rel(got, gamma(s) * gamma(s + nu)));
    }
    Ok((worst <= 1e-8, format!("max rel err {worst:.1e}")))
}

fn main() {
    let criteria: [(&str, f64, fn() -> Check); 16] = [
        ("reciprocity", 10.0, reciprocity),
        ("uniform bound", f64::INFINITY, uniform_bound),
        ("eigenfunction identity", f64::INFINITY, eigenfunction),
        ("Mellin closed forms", 60.0, mellin_closed_forms),
        ("Parseval", f64::INFINITY, parseval),
        ("weight q for x e^-x", f64::INFINITY, weight_of_x_exp),
        ("factorization and Parseval-type representation", 300.0, theorem_one),
        ("kernel identity and bound", f64::INFINITY, kernel_identity),
        ("Gram LAG_2_4", f64::INFINITY, laguerre),
        ("Gram CDH_2_10", 120.0, continuous_dual_hahn),
        ("Gram GEN_2_6 closed forms", f64::INFINITY, generated_laguerre),
        ("route equivalence", f64::INFINITY, route_equivalence),
        ("convolution orthogonality CONV_2_28, CONV_2_34", 900.0, convolution_orthogonality),
        ("d-orthogonality DORTH_3_17..3_20", f64::INFINITY, d_orthogonality),
        ("Wilson parameter symmetry", f64::INFINITY, wilson_symmetry),
        ("rho moments", f64::INFINITY, rho_moments),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && secs <= *limit, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let over = if secs > *limit { format!(", over the {limit} s budget") } else { String::new() };
        println!("criterion {:>2} {}: {name}: {detail} ({secs:.1} s{over})", i + 1, if pass { "PASS" } else { "FAIL" });
        if !pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

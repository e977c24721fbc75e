//! The `klortho` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a computation
//! does not converge, 2 on usage errors. Diagnostics are a single line on
//! standard error naming the offending flag. Floating output carries 17
//! significant digits and is byte-identical across runs.

mod expr;

pub use expr::{Expr, ExprError};

use crate::convolution::{convolve, ConvolutionKind};
use crate::error::Error;
use crate::families::{load_coefficients, FamilySpec};
use crate::kl::{kl_forward, kl_inverse, TransformSpec};
use crate::ortho::{fmt17, verify_case, CaseId, GramReport, OrthoCase, Route};
use crate::quad::QuadSpec;
use crate::specfun::{besselk_imag, besselk_real, complex_lngamma, gamma_abs_sq, rho_nu, ComplexValue};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "KLORTHO_THREADS";

#[derive(Debug)]
enum Failure {
    Usage(String),
    Run(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Run(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Run(m) => m,
        }
    }

    /// Numerical breakdowns exit with 1; anything traceable to the input with 2.
    fn from_error(context: &str, e: Error) -> Failure {
        let msg = format!("{context}: {e}");
        match e {
            Error::NonConvergence { .. } | Error::Overflow(_) => Failure::Run(msg),
            _ => Failure::Usage(msg),
        }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// Numbers must be plain decimal literals: no `inf`, `nan` or hex forms.
fn decimal(s: &str) -> Result<f64, String> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match mantissa.split_once('.') {
        Some((a, b)) => (digits(a) || a.is_empty()) && (digits(b) || b.is_empty()) && !(a.is_empty() && b.is_empty()),
        None => digits(mantissa),
    };
    let exponent_ok = exponent.is_none_or(|e| digits(e.strip_prefix(['-', '+']).unwrap_or(e)));
    if !(mantissa_ok && exponent_ok) {
        return Err(format!("'{s}' is not a decimal number"));
    }
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a decimal number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' overflows"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "klortho", version, about = "Kontorovich-Lebedev transforms and orthogonality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function or a polynomial family member
    Eval(EvalArgs),
    /// Forward KL transform of an expression in x
    Transform(TransformArgs),
    /// Inverse KL transform of an expression in tau
    Invert(InvertArgs),
    /// KL convolution of two expressions in x
    Convolve(ConvolveArgs),
    /// Gram matrix of a named relation
    Gram(CaseArgs),
    /// Run named relations; exits with 1 unless all pass
    Verify(CaseArgs),
    /// Print the case identifiers, one per line
    ListCases,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}

#[derive(Args, Debug, Clone, Copy)]
struct QuadArgs {
    /// Absolute quadrature tolerance
    #[arg(long, value_parser = decimal)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, value_parser = decimal)]
    rel_tol: Option<f64>,
    /// Number of step halvings
    #[arg(long)]
    max_refinements: Option<usize>,
    /// Added to ln(1/abs_tol) when choosing truncation points
    #[arg(long, value_parser = decimal)]
    truncation_margin: Option<f64>,
}

impl QuadArgs {
    fn apply(&self, base: QuadSpec) -> Result<QuadSpec, Failure> {
        let unit = |v: Option<f64>, flag: &str, d: f64| match v {
            Some(t) if !(t > 0.0 && t < 1.0) => usage(format!("{flag} must lie in (0, 1), got {t}")),
            Some(t) => Ok(t),
            None => Ok(d),
        };
        let q = QuadSpec {
            abs_tol: unit(self.abs_tol, "--abs-tol", base.abs_tol)?,
            rel_tol: unit(self.rel_tol, "--rel-tol", base.rel_tol)?,
            max_refinements: match self.max_refinements {
                Some(0) => return usage("--max-refinements must be at least 1"),
                Some(r) => r,
                None => base.max_refinements,
            },
            truncation_margin: match self.truncation_margin {
                Some(m) if m < 0.0 => return usage(format!("--truncation-margin must be non-negative, got {m}")),
                Some(m) => m,
                None => base.truncation_margin,
            },
        };
        Ok(q)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Function {
    /// K_{iτ}(x): --tau, --x
    BesselkImag,
    /// K_ν(x): --nu, --x
    BesselkReal,
    /// ρ_ν(x) = 2 x^{ν/2} K_ν(2√x): --nu, --x
    Rho,
    /// ln Γ(re + i·im), printed as [re, im]: --re, --im
    Lngamma,
    /// |Γ(a + it)|²: --a, --t
    GammaAbsSq,
    /// L_n^α(x): --n, --alpha, --x
    Laguerre,
    /// Wilson W_n(t²): --n, --a, --b, --c, --d, --t
    Wilson,
    /// Continuous dual Hahn S_n(t²): --n, --a, --b, --c, --t
    Cdh,
    /// p_n(x): --n, --nu, --alpha, --x
    PrudnikovP,
    /// V_n(τ): --n, --nu, --alpha, --tau
    PrudnikovV,
    /// S_n(τ): --n, --nu, --alpha, --tau
    PrudnikovS,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    #[arg(value_enum)]
    function: Function,
    #[arg(long, value_parser = decimal)]
    tau: Option<f64>,
    #[arg(long, value_parser = decimal)]
    x: Option<f64>,
    #[arg(long, value_parser = decimal)]
    t: Option<f64>,
    #[arg(long, value_parser = decimal)]
    nu: Option<f64>,
    #[arg(long, value_parser = decimal)]
    re: Option<f64>,
    #[arg(long, value_parser = decimal)]
    im: Option<f64>,
    #[arg(long, value_parser = decimal)]
    a: Option<f64>,
    #[arg(long, value_parser = decimal)]
    b: Option<f64>,
    #[arg(long, value_parser = decimal)]
    c: Option<f64>,
    #[arg(long, value_parser = decimal)]
    d: Option<f64>,
    #[arg(long, value_parser = decimal)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    output: Format,
}

impl EvalArgs {
    fn given(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("tau", self.tau.is_some()),
            ("x", self.x.is_some()),
            ("t", self.t.is_some()),
            ("nu", self.nu.is_some()),
            ("re", self.re.is_some()),
            ("im", self.im.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("c", self.c.is_some()),
            ("d", self.d.is_some()),
            ("alpha", self.alpha.is_some()),
            ("n", self.n.is_some()),
        ]
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum KindArg {
    #[default]
    Standard,
    Hat,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct TransformSpecArgs {
    /// Kernel K_{iτ}(α x^β): α
    #[arg(long, value_parser = decimal, conflicts_with = "hat")]
    alpha: Option<f64>,
    /// Kernel K_{iτ}(α x^β): β
    #[arg(long, value_parser = decimal, conflicts_with = "hat")]
    beta: Option<f64>,
    /// The (α, β) = (2, 1/2) transform
    #[arg(long)]
    hat: bool,
}

impl TransformSpecArgs {
    fn spec(&self) -> Result<TransformSpec, Failure> {
        if self.hat {
            return Ok(TransformSpec::hat());
        }
        let s = TransformSpec { alpha: self.alpha.unwrap_or(1.0), beta: self.beta.unwrap_or(1.0) };
        s.validate().map_err(|e| Failure::Usage(format!("--alpha/--beta: {e}")))?;
        Ok(s)
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct TransformArgs {
    /// f(x) in the expression grammar
    #[arg(long)]
    f: String,
    #[arg(long, value_parser = decimal)]
    tau: f64,
    #[command(flatten)]
    spec: TransformSpecArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value_t)]
    output: Format,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct InvertArgs {
    /// F(tau) in the expression grammar
    #[arg(long)]
    image: String,
    #[arg(long, value_parser = decimal)]
    x: f64,
    #[command(flatten)]
    spec: TransformSpecArgs,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value_t)]
    output: Format,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ConvolveArgs {
    #[arg(long)]
    f: String,
    #[arg(long)]
    g: String,
    #[arg(long, value_parser = decimal)]
    x: f64,
    #[arg(long, value_enum, default_value_t)]
    kind: KindArg,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value_t)]
    output: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
enum RouteArg {
    #[default]
    Canonical,
    Alternate,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct CaseArgs {
    /// Case identifier (see list-cases); verify also takes several, or `all`
    #[arg(long = "case", required = true)]
    cases: Vec<String>,
    /// Matrix size, or the largest n for the d-orthogonality cases
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_parser = decimal)]
    alpha: Option<f64>,
    #[arg(long, value_parser = decimal)]
    beta: Option<f64>,
    #[arg(long, value_parser = decimal)]
    gamma: Option<f64>,
    #[arg(long, value_parser = decimal)]
    mu: Option<f64>,
    #[arg(long, value_parser = decimal)]
    eta: Option<f64>,
    #[arg(long, value_parser = decimal)]
    a: Option<f64>,
    #[arg(long, value_parser = decimal)]
    b: Option<f64>,
    #[arg(long, value_parser = decimal)]
    c: Option<f64>,
    #[arg(long, value_parser = decimal)]
    d: Option<f64>,
    #[arg(long, value_parser = decimal)]
    nu: Option<f64>,
    /// Coefficient table (JSON) for the cases built on injected polynomials
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    route: RouteArg,
    /// Lift the size cap of the triple-integral cases
    #[arg(long)]
    allow_expensive: bool,
    /// Off-diagonal threshold, relative to the diagonal scale
    #[arg(long, value_parser = decimal)]
    tol_off: Option<f64>,
    /// Diagonal threshold, relative
    #[arg(long, value_parser = decimal)]
    tol_diag: Option<f64>,
    /// Include wall-clock time in the JSON report (breaks byte-for-byte reproducibility)
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[arg(long, value_enum, default_value_t)]
    output: Format,
}

impl CaseArgs {
    fn params(&self) -> Vec<(&'static str, f64)> {
        [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("mu", self.mu),
            ("eta", self.eta),
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("nu", self.nu),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }

    fn case_ids(&self, many: bool) -> Result<Vec<CaseId>, Failure> {
        let mut ids = Vec::new();
        for s in &self.cases {
            if s.eq_ignore_ascii_case("all") {
                ids.extend(CaseId::all());
            } else {
                ids.push(s.parse::<CaseId>().map_err(|_| Failure::Usage(format!("--case: unknown case '{s}' (see list-cases)")))?);
            }
        }
        if ids.len() > 1 && !many {
            return usage("--case: gram takes a single case");
        }
        if ids.len() > 1 {
            if let Some((k, _)) = self.params().first() {
                return usage(format!("--{k}: parameters apply to a single --case only"));
            }
            if self.coeffs.is_some() {
                return usage("--coeffs: a coefficient table applies to a single --case only");
            }
            if self.output == Format::Csv {
                return usage("--output csv: CSV holds a single matrix; pass one --case");
            }
        }
        Ok(ids)
    }

    fn build(&self, id: CaseId) -> Result<(OrthoCase, usize, f64, f64), Failure> {
        let mut case = OrthoCase::new(id);
        for (k, v) in self.params() {
            case = case.with_param(k, v).map_err(|e| Failure::Usage(format!("--{k}: {e}")))?;
        }
        case.validate().map_err(|e| Failure::Usage(format!("--case {id}: {e}")))?;
        if let Some(path) = &self.coeffs {
            if !id.uses_coefficients() {
                return usage(format!("--coeffs: case {id} takes no coefficient table"));
            }
            let table = load_coefficients(path).map_err(|e| Failure::Usage(format!("--coeffs: {e}")))?;
            case = case.with_coeffs(Arc::new(table));
        }
        case.route = match self.route {
            RouteArg::Canonical => Route::Canonical,
            RouteArg::Alternate => Route::Alternate,
        };
        case.allow_expensive = self.allow_expensive;
        case.quad = self.quad.apply(case.quad)?;
        let size = self.n.unwrap_or(id.default_size());
        let cap = id.max_size(self.allow_expensive);
        if size == 0 || size > cap {
            let hint = if id.is_convolution() && !self.allow_expensive { " (--allow-expensive lifts the cap)" } else { "" };
            return usage(format!("--n: {id} accepts 1..={cap}, got {size}{hint}"));
        }
        let (off, diag) = id.default_tolerances();
        let tol = |v: Option<f64>, flag: &str, d: f64| match v {
            Some(t) if !(t > 0.0) => usage(format!("{flag} must be positive, got {t}")),
            Some(t) => Ok(t),
            None => Ok(d),
        };
        Ok((case, size, tol(self.tol_off, "--tol-off", off)?, tol(self.tol_diag, "--tol-diag", diag)?))
    }
}

fn scalar_output(v: f64, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json | Format::Plain => Ok(fmt17(v)),
        Format::Csv => usage("--output csv applies to matrix output only (gram, verify)"),
    }
}

fn eval(args: &EvalArgs) -> Result<String, Failure> {
    use Function::*;
    let allowed: &[&str] = match args.function {
        BesselkImag => &["tau", "x"],
        BesselkReal | Rho => &["nu", "x"],
        Lngamma => &["re", "im"],
        GammaAbsSq => &["a", "t"],
        Laguerre => &["n", "alpha", "x"],
        Wilson => &["n", "a", "b", "c", "d", "t"],
        Cdh => &["n", "a", "b", "c", "t"],
        PrudnikovP => &["n", "nu", "alpha", "x"],
        PrudnikovV | PrudnikovS => &["n", "nu", "alpha", "tau"],
    };
    let name = args.function.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    for (flag, given) in args.given() {
        if given && !allowed.contains(&flag) {
            return usage(format!("--{flag}: not a parameter of {name} (expects {})", flags_list(allowed)));
        }
    }
    let ctx = format!("eval {name}");
    let lift = |r: crate::Result<f64>| r.map_err(|e| Failure::from_error(&ctx, e));
    let family = |spec: FamilySpec, arg: f64| -> Result<f64, Failure> {
        spec.validate().map_err(|e| Failure::from_error(&ctx, e))?;
        lift(spec.eval(need(args.n, "n")?, arg))
    };
    let value = match args.function {
        BesselkImag => lift(besselk_imag(need(args.tau, "tau")?, need(args.x, "x")?, false))?,
        BesselkReal => lift(besselk_real(need(args.nu, "nu")?, need(args.x, "x")?))?,
        Rho => lift(rho_nu(need(args.nu, "nu")?, need(args.x, "x")?))?,
        GammaAbsSq => lift(gamma_abs_sq(need(args.a, "a")?, need(args.t, "t")?))?,
        Lngamma => {
            let z = ComplexValue::new(need(args.re, "re")?, args.im.unwrap_or(0.0));
            let w = complex_lngamma(z).map_err(|e| Failure::from_error(&ctx, e))?;
            return match args.output {
                Format::Json => Ok(format!("[{}, {}]", fmt17(w.re), fmt17(w.im))),
                Format::Plain => Ok(format!("{} {}", fmt17(w.re), fmt17(w.im))),
                Format::Csv => usage("--output csv applies to matrix output only (gram, verify)"),
            };
        }
        Laguerre => family(FamilySpec::Laguerre { alpha: need(args.alpha, "alpha")? }, need(args.x, "x")?)?,
        Wilson => family(
            FamilySpec::Wilson { a: need(args.a, "a")?, b: need(args.b, "b")?, c: need(args.c, "c")?, d: need(args.d, "d")? },
            need(args.t, "t")?,
        )?,
        Cdh => family(
            FamilySpec::ContinuousDualHahn { a: need(args.a, "a")?, b: need(args.b, "b")?, c: need(args.c, "c")? },
            need(args.t, "t")?,
        )?,
        PrudnikovP => family(FamilySpec::PrudnikovP { nu: need(args.nu, "nu")?, alpha: need(args.alpha, "alpha")? }, need(args.x, "x")?)?,
        PrudnikovV => family(FamilySpec::PrudnikovV { nu: need(args.nu, "nu")?, alpha: need(args.alpha, "alpha")? }, need(args.tau, "tau")?)?,
        PrudnikovS => family(FamilySpec::PrudnikovS { nu: need(args.nu, "nu")?, alpha: need(args.alpha, "alpha")? }, need(args.tau, "tau")?)?,
    };
    scalar_output(value, args.output)
}

fn flags_list(flags: &[&str]) -> String {
    flags.iter().map(|f| format!("--{f}")).collect::<Vec<_>>().join(", ")
}

fn parse_expr(src: &str, var: &'static str, flag: &str) -> Result<Expr, Failure> {
    Expr::parse(src, var).map_err(|e| Failure::Usage(format!("{flag}: {e}")))
}

fn transform(args: &TransformArgs) -> Result<String, Failure> {
    let f = parse_expr(&args.f, "x", "--f")?.real_function().map_err(|e| Failure::Usage(format!("--f: {e}")))?;
    let spec = args.spec.spec()?;
    let quad = args.quad.apply(QuadSpec::default())?;
    let v = kl_forward(&f, args.tau, &spec, &quad).map_err(|e| Failure::from_error("transform", e))?;
    scalar_output(v, args.output)
}

fn invert(args: &InvertArgs) -> Result<String, Failure> {
    let quad = args.quad.apply(QuadSpec::default())?;
    let big_f = parse_expr(&args.image, "tau", "--image")?
        .index_function(quad.log_cutoff())
        .map_err(|e| Failure::Usage(format!("--image: {e}")))?;
    let spec = args.spec.spec()?;
    let v = kl_inverse(&big_f, args.x, &spec, &quad).map_err(|e| Failure::from_error("invert", e))?;
    scalar_output(v, args.output)
}

fn convolution(args: &ConvolveArgs) -> Result<String, Failure> {
    let f = parse_expr(&args.f, "x", "--f")?.real_function().map_err(|e| Failure::Usage(format!("--f: {e}")))?;
    let g = parse_expr(&args.g, "x", "--g")?.real_function().map_err(|e| Failure::Usage(format!("--g: {e}")))?;
    let kind = match args.kind {
        KindArg::Standard => ConvolutionKind::Standard,
        KindArg::Hat => ConvolutionKind::Hat,
    };
    let quad = args.quad.apply(QuadSpec::two_dim())?;
    let v = convolve(&f, &g, args.x, kind, &quad).map_err(|e| Failure::from_error("convolve", e))?;
    scalar_output(v, args.output)
}

fn plain_report(r: &GramReport) -> String {
    let mut out = format!(
        "{} {} N={} max_offdiag_rel={} max_diag_rel_err={}\n",
        r.case_id,
        if r.pass { "pass" } else { "FAIL" },
        r.n,
        fmt17(r.max_offdiag_rel),
        fmt17(r.max_diag_rel_err)
    );
    for row in &r.matrix {
        out.push_str(&row.iter().map(|&v| fmt17(v)).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    for e in &r.errors {
        out.push_str(&format!("error ({}, {}): {}\n", e.n, e.m, e.message));
    }
    out
}

/// Runs the selected cases; the flag is true when every report passes.
fn cases(args: &CaseArgs, many: bool) -> Result<(String, bool), Failure> {
    let ids = args.case_ids(many)?;
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let (case, size, tol_off, tol_diag) = args.build(id)?;
        let r = verify_case(&case, size, tol_off, tol_diag).map_err(|e| Failure::from_error(&format!("--case {id}"), e))?;
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let text = match args.output {
        Format::Json if reports.len() == 1 => reports[0].to_json(args.timing),
        Format::Json => {
            let body: Vec<String> = reports.iter().map(|r| r.to_json(args.timing)).collect();
            format!("[\n{}\n]", body.join(",\n"))
        }
        Format::Csv => reports[0].to_csv(),
        Format::Plain => reports.iter().map(plain_report).collect::<String>(),
    };
    Ok((text, pass))
}

fn dispatch(cli: Cli) -> Result<(String, i32), Failure> {
    let ok = |s: String| Ok((s, EXIT_OK));
    match cli.command {
        Command::Eval(a) => ok(eval(&a)?),
        Command::Transform(a) => ok(transform(&a)?),
        Command::Invert(a) => ok(invert(&a)?),
        Command::Convolve(a) => ok(convolution(&a)?),
        Command::Gram(a) => ok(cases(&a, false)?.0),
        Command::Verify(a) => {
            let (text, pass) = cases(&a, true)?;
            Ok((text, if pass { EXIT_OK } else { EXIT_FAILURE }))
        }
        Command::ListCases => ok(CaseId::all().map(CaseId::as_str).collect::<Vec<_>>().join("\n")),
    }
}

/// The clap message folded onto one line, without the usage block.
fn one_line(e: &clap::Error) -> String {
    let text = e.render().to_string();
    let mut parts = Vec::new();
    for line in text.lines() {
        let l = line.trim();
        if l.starts_with("Usage:") || l.starts_with("For more information") {
            break;
        }
        if !l.is_empty() && !l.starts_with("tip:") {
            parts.push(l.trim_start_matches("error: ").to_owned());
        }
    }
    parts.join(" ")
}

fn threads() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'")),
        },
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = writeln!(err, "klortho: {}", one_line(&e));
                    EXIT_USAGE
                }
            };
        }
    };
    let result = threads().and_then(|n| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Run(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(cli))
    });
    match result {
        Ok((text, code)) => {
            let end = if text.ends_with('\n') { "" } else { "\n" };
            let _ = write!(out, "{text}{end}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "klortho: {}", f.message());
            f.code()
        }
    }
}

/// [`run`] on the process's standard streams.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    let code = run(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

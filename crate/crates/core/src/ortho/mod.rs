//! Gram-matrix harness: each named relation is turned into a matrix of inner
//! products that should equal a diagonal of printed norms.

mod dorth;
mod routes;

pub use dorth::{d_orth_check, DOrthEntry, DOrthReport};

use crate::error::{Error, Result};
use crate::families::CoefficientTable;
use crate::quad::QuadSpec;
use crate::specfun::{ln_gamma_real, pochhammer_real};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

/// Identifier of a relation; the string form is what the CLI accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// Classical Laguerre orthogonality.
    Laguerre,
    /// Laguerre orthogonality moved to the index side by `F`.
    LaguerreIndex,
    /// Continuous dual Hahn polynomials with third parameter 1/2.
    CdhHalf,
    /// Laguerre orthogonality moved to the index side by `F_{η,1/2}`.
    LaguerreSqrtIndex,
    /// Continuous dual Hahn orthogonality written with `F_{2,1/2}` images.
    CdhIndex,
    /// Hat-convolution orthogonality of the power CDH families, weight `x^c`.
    CdhHatConv,
    /// Exponential CDH families on the index side with weight `q`.
    CdhExpIndex,
    /// Convolution orthogonality of the exponential CDH families, weight `e^x x^c`.
    CdhExpConv,
    /// Wilson orthogonality written with `F_{2,1/2}` images.
    WilsonIndex,
    /// Hat-convolution orthogonality of the power Wilson families, weight `K_{c-d}(2√x) x^{(c+d)/2}`.
    WilsonHatConv,
    /// Exponential Wilson families on the index side with weight `q`.
    WilsonExpIndex,
    /// Convolution orthogonality of the exponential Wilson families.
    WilsonExpConv,
    /// Prudnikov polynomials, weight `x^α ρ_ν`.
    PrudnikovP,
    /// Polynomials orthonormal under `e^{-x} ρ_ν`.
    PrudnikovQ,
    /// Polynomials orthonormal under `e^{-1/x} ρ_ν / x`.
    PrudnikovSmallQ,
    /// Index-side orthogonality of the `S`/`U` transforms of Prudnikov polynomials.
    PrudnikovIndexP,
    /// Index-side orthogonality generated by the `e^{-x} ρ_ν` family.
    PrudnikovIndexQ,
    /// Index-side orthogonality generated by the `e^{-1/x} ρ_ν / x` family.
    PrudnikovIndexSmallQ,
    /// Vanishing `V_{2n}` moments.
    DOrthEvenV,
    /// Vanishing `S_{2n}` moments.
    DOrthEvenS,
    /// Vanishing `V_{2n+1}` moments.
    DOrthOddV,
    /// Vanishing `S_{2n+1}` moments.
    DOrthOddS,
}

const CASE_NAMES: [(CaseId, &str); 22] = [
    (CaseId::Laguerre, "LAG_2_4"),
    (CaseId::LaguerreIndex, "GEN_2_6"),
    (CaseId::CdhHalf, "CDH_2_10"),
    (CaseId::LaguerreSqrtIndex, "GEN_2_15"),
    (CaseId::CdhIndex, "CDHKL_2_22"),
    (CaseId::CdhHatConv, "CONV_2_28"),
    (CaseId::CdhExpIndex, "CDHCONV_2_30"),
    (CaseId::CdhExpConv, "CONV_2_34"),
    (CaseId::WilsonIndex, "WIL_2_36"),
    (CaseId::WilsonHatConv, "CONVHAT_2_39"),
    (CaseId::WilsonExpIndex, "WILCONV_2_40"),
    (CaseId::WilsonExpConv, "CONV_2_46"),
    (CaseId::PrudnikovP, "PRUD_3_1"),
    (CaseId::PrudnikovQ, "PRUD_3_2"),
    (CaseId::PrudnikovSmallQ, "PRUD_3_3"),
    (CaseId::PrudnikovIndexP, "PRUD_3_8"),
    (CaseId::PrudnikovIndexQ, "PRUD_3_11"),
    (CaseId::PrudnikovIndexSmallQ, "PRUD_3_14"),
    (CaseId::DOrthEvenV, "DORTH_3_17"),
    (CaseId::DOrthEvenS, "DORTH_3_18"),
    (CaseId::DOrthOddV, "DORTH_3_19"),
    (CaseId::DOrthOddS, "DORTH_3_20"),
];

impl CaseId {
    pub fn all() -> impl Iterator<Item = CaseId> {
        CASE_NAMES.iter().map(|(c, _)| *c)
    }

    pub fn as_str(self) -> &'static str {
        CASE_NAMES.iter().find(|(c, _)| *c == self).map(|(_, s)| *s).unwrap_or("?")
    }

    /// Parameter names with their defaults.
    pub fn default_params(self) -> &'static [(&'static str, f64)] {
        use CaseId::*;
        match self {
            Laguerre => &[("alpha", 0.0)],
            LaguerreIndex => &[("beta", 0.0), ("gamma", 0.0), ("mu", 0.5)],
            CdhHalf => &[("beta", 0.0), ("gamma", 0.0)],
            LaguerreSqrtIndex => &[("beta", 0.0), ("gamma", 0.0), ("mu", 1.0), ("eta", 2.0)],
            CdhIndex | CdhHatConv | CdhExpIndex | CdhExpConv => &[("a", 1.0), ("b", 1.0), ("c", 0.3)],
            WilsonIndex | WilsonHatConv | WilsonExpIndex | WilsonExpConv => {
                &[("a", 1.0), ("b", 1.0), ("c", 0.3), ("d", 0.7)]
            }
            PrudnikovP | PrudnikovIndexP => &[("nu", 0.5), ("alpha", 1.0)],
            PrudnikovQ | PrudnikovSmallQ | PrudnikovIndexQ | PrudnikovIndexSmallQ => &[("nu", 0.5)],
            DOrthEvenV | DOrthEvenS | DOrthOddV | DOrthOddS => &[("nu", 0.5), ("alpha", 1.0)],
        }
    }

    pub fn is_d_orthogonality(self) -> bool {
        matches!(self, CaseId::DOrthEvenV | CaseId::DOrthEvenS | CaseId::DOrthOddV | CaseId::DOrthOddS)
    }

    /// Cases whose entries are triple integrals.
    pub fn is_convolution(self) -> bool {
        matches!(self, CaseId::CdhHatConv | CaseId::CdhExpConv | CaseId::WilsonHatConv | CaseId::WilsonExpConv)
    }

    /// Cases that read polynomial coefficients (generated from moments when none are injected).
    pub fn uses_coefficients(self) -> bool {
        matches!(
            self,
            CaseId::PrudnikovP
                | CaseId::PrudnikovQ
                | CaseId::PrudnikovSmallQ
                | CaseId::PrudnikovIndexP
                | CaseId::PrudnikovIndexQ
                | CaseId::PrudnikovIndexSmallQ
        )
    }

    /// Default `(off-diagonal, diagonal)` tolerances.
    pub fn default_tolerances(self) -> (f64, f64) {
        use CaseId::*;
        match self {
            Laguerre => (1e-10, 1e-10),
            CdhHatConv | CdhExpConv | WilsonHatConv | WilsonExpConv => (1e-4, 1e-4),
            DOrthEvenV | DOrthEvenS | DOrthOddV | DOrthOddS => (1e-6, 1e-8),
            _ => (1e-6, 1e-6),
        }
    }

    pub fn default_size(self) -> usize {
        if self.is_convolution() || self.is_d_orthogonality() {
            2
        } else {
            4
        }
    }

    /// Largest `N` accepted; the convolution cases need `allow_expensive` beyond 2.
    pub fn max_size(self, allow_expensive: bool) -> usize {
        match self {
            CaseId::Laguerre | CaseId::CdhHalf | CaseId::PrudnikovP => 11,
            CaseId::DOrthEvenV | CaseId::DOrthEvenS | CaseId::DOrthOddV | CaseId::DOrthOddS => 3,
            c if c.is_convolution() && !allow_expensive => 2,
            _ => 6,
        }
    }

    fn default_quad(self) -> QuadSpec {
        match self {
            CaseId::Laguerre | CaseId::PrudnikovP | CaseId::PrudnikovQ | CaseId::PrudnikovSmallQ => {
                QuadSpec::with_tolerances(1e-15, 1e-13)
            }
            CaseId::CdhHatConv | CaseId::CdhExpConv => QuadSpec::with_tolerances(1e-9, 1e-7),
            CaseId::WilsonHatConv | CaseId::WilsonExpConv => QuadSpec::with_tolerances(1e-8, 1e-6),
            _ => QuadSpec::with_tolerances(1e-12, 1e-9),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CASE_NAMES
            .iter()
            .find(|(_, name)| name.eq_ignore_ascii_case(s))
            .map(|(c, _)| *c)
            .ok_or_else(|| Error::Domain(format!("unknown case '{s}'")))
    }
}

/// How an entry is computed. Every case has a canonical route; some also
/// have an independent alternate route used for cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    #[default]
    Canonical,
    Alternate,
}

/// A relation with its parameters, optional coefficient table and quadrature settings.
#[derive(Debug, Clone)]
pub struct OrthoCase {
    pub id: CaseId,
    pub params: BTreeMap<String, f64>,
    pub coeffs: Option<Arc<CoefficientTable>>,
    pub quad: QuadSpec,
    pub route: Route,
    /// Lifts the size cap of the triple-integral cases.
    pub allow_expensive: bool,
}

impl OrthoCase {
    pub fn new(id: CaseId) -> Self {
        let params = id.default_params().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self { id, params, coeffs: None, quad: id.default_quad(), route: Route::Canonical, allow_expensive: false }
    }

    /// Sets a parameter; names the case does not use are rejected.
    pub fn with_param(mut self, name: &str, value: f64) -> Result<Self> {
        match self.params.get_mut(name) {
            Some(v) => {
                *v = value;
                Ok(self)
            }
            None => Err(Error::Domain(format!(
                "case {} has no parameter '{name}' (expected one of {:?})",
                self.id,
                self.id.default_params().iter().map(|(k, _)| *k).collect::<Vec<_>>()
            ))),
        }
    }

    pub fn with_coeffs(mut self, coeffs: Arc<CoefficientTable>) -> Self {
        self.coeffs = Some(coeffs);
        self
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn with_quad(mut self, quad: QuadSpec) -> Self {
        self.quad = quad;
        self
    }

    pub fn p(&self, name: &str) -> f64 {
        self.params[name]
    }

    /// Checks the parameter constraints of the underlying relation.
    pub fn validate(&self) -> Result<()> {
        use CaseId::*;
        let bad = |msg: String| Err(Error::Domain(format!("{}: {msg}", self.id)));
        let positive = |names: &[&str]| names.iter().all(|n| self.p(n) > 0.0);
        match self.id {
            Laguerre if self.p("alpha") <= -1.0 => bad("α must exceed -1".into()),
            LaguerreIndex | LaguerreSqrtIndex | CdhHalf if self.p("beta") <= -1.0 || self.p("gamma") <= -1.0 => {
                bad("β and γ must exceed -1".into())
            }
            LaguerreIndex | LaguerreSqrtIndex if !(self.p("mu") > 0.0 && self.p("mu") <= 1.0) => {
                bad("μ must lie in (0, 1]".into())
            }
            LaguerreSqrtIndex if self.p("eta") <= 0.0 => bad("η must be positive".into()),
            CdhIndex | CdhHatConv | CdhExpIndex | CdhExpConv if !positive(&["a", "b", "c"]) => {
                bad("a, b, c must be positive".into())
            }
            WilsonIndex | WilsonHatConv | WilsonExpIndex | WilsonExpConv if !positive(&["a", "b", "c", "d"]) => {
                bad("a, b, c, d must be positive".into())
            }
            CdhExpIndex | CdhExpConv | WilsonExpIndex | WilsonExpConv if self.p("c") >= 0.5 => {
                bad("c must lie in (0, 1/2)".into())
            }
            PrudnikovP | PrudnikovIndexP | DOrthEvenV | DOrthEvenS | DOrthOddV | DOrthOddS
                if !(self.p("nu") > 0.0 && self.p("alpha") > 0.0) =>
            {
                bad("ν and α must be positive".into())
            }
            PrudnikovQ | PrudnikovSmallQ | PrudnikovIndexQ | PrudnikovIndexSmallQ if self.p("nu") <= 0.0 => {
                bad("ν must be positive".into())
            }
            PrudnikovIndexQ if self.p("nu") >= 2.0 => bad("ν must be below 2".into()),
            _ => Ok(()),
        }
    }
}

/// `Γ(x)` for real `x > 0` via the log-gamma.
fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma_real(x)?.exp())
}

/// `n! Γ(n+a+b)Γ(n+a+c)Γ(n+b+c)`.
fn cdh_norm(n: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(pochhammer_real(1.0, n) * gamma(nf + a + b)? * gamma(nf + a + c)? * gamma(nf + b + c)?)
}

/// `n! (n+a+b+c+d-1)_n Π_{pairs} Γ(n+·+·) / Γ(2n+a+b+c+d)`.
fn wilson_norm(n: usize, a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let nf = n as f64;
    let s = a + b + c + d;
    let ln = ln_gamma_real(nf + a + b)? + ln_gamma_real(nf + a + c)? + ln_gamma_real(nf + a + d)?
        + ln_gamma_real(nf + b + c)?
        + ln_gamma_real(nf + b + d)?
        + ln_gamma_real(nf + c + d)?
        - ln_gamma_real(2.0 * nf + s)?;
    Ok(pochhammer_real(1.0, n) * ln.exp() * pochhammer_real(nf + s - 1.0, n))
}

/// The printed right-hand side at `n = m`.
///
/// ```
/// use klortho::ortho::{expected_diagonal, CaseId, OrthoCase};
/// let v = expected_diagonal(&OrthoCase::new(CaseId::CdhHalf), 0).unwrap();
/// assert!((v - std::f64::consts::PI / 8.0).abs() < 1e-14);
/// ```
pub fn expected_diagonal(case: &OrthoCase, n: usize) -> Result<f64> {
    use CaseId::*;
    case.validate()?;
    let nf = n as f64;
    let fact = pochhammer_real(1.0, n);
    let p = |k: &str| case.p(k);
    Ok(match case.id {
        Laguerre => gamma(nf + p("alpha") + 1.0)? / fact,
        LaguerreIndex => {
            let alpha = p("beta") + p("gamma") + 1.0;
            PI * PI / (2.0 * fact) * gamma(nf + alpha + 1.0)?
        }
        CdhHalf => {
            let (b, g) = (p("beta"), p("gamma"));
            0.5 * fact * gamma(nf + b + g + 2.0)? * gamma(nf + b + 1.5)? * gamma(nf + g + 1.5)?
        }
        LaguerreSqrtIndex => {
            let alpha = p("beta") + p("gamma") + 1.0;
            PI * PI / fact * gamma(nf + alpha + 1.0)?
        }
        CdhIndex => 4.0 * cdh_norm(n, p("a"), p("b"), p("c"))?,
        CdhHatConv => 2.0 * cdh_norm(n, p("a"), p("b"), p("c"))?,
        CdhExpIndex | CdhExpConv => {
            let (a, b, c) = (p("a"), p("b"), p("c"));
            cdh_norm(n, a, b, c)? * gamma(0.5 - c)? / (2f64.powf(c) * PI.sqrt() * gamma(a + 0.5)? * gamma(b + 0.5)?)
        }
        WilsonIndex => 4.0 * wilson_norm(n, p("a"), p("b"), p("c"), p("d"))?,
        WilsonHatConv => {
            let (c, d) = (p("c"), p("d"));
            wilson_norm(n, p("a"), p("b"), c, d)? / gamma(c + d)?
        }
        WilsonExpIndex | WilsonExpConv => {
            let (a, b, c, d) = (p("a"), p("b"), p("c"), p("d"));
            wilson_norm(n, a, b, c, d)? * gamma(0.5 - c)?
                / (2f64.powf(c + d) * gamma(0.5 + d)? * gamma(a + 0.5)? * gamma(b + 0.5)?)
        }
        PrudnikovP | PrudnikovQ | PrudnikovSmallQ => 1.0,
        PrudnikovIndexP => 0.5 * gamma(2.0 * p("alpha") + p("nu"))?,
        PrudnikovIndexQ => 0.5 * PI * PI,
        PrudnikovIndexSmallQ => PI * PI,
        DOrthEvenV | DOrthEvenS | DOrthOddV | DOrthOddS => 0.0,
    })
}

/// Coefficients of the orthonormal polynomials a Prudnikov case uses: the
/// injected table if there is one, else `rows` rows generated from the
/// moments of the case's weight through a Cholesky factor of the Hankel matrix.
pub fn coefficient_table(case: &OrthoCase, rows: usize) -> Result<Arc<CoefficientTable>> {
    case.validate()?;
    if rows == 0 || rows > crate::specfun::MAX_DEGREE + 1 {
        return Err(Error::Domain(format!("rows must lie in 1..={}, got {rows}", crate::specfun::MAX_DEGREE + 1)));
    }
    routes::case_table(case, rows)
}

/// A quadrature failure recorded against one matrix entry.
#[derive(Debug, Clone, Serialize)]
pub struct EntryError {
    pub n: usize,
    pub m: usize,
    pub message: String,
}

/// Outcome of one case run.
///
/// For the d-orthogonality cases `matrix[i]` holds the normalized index-side
/// residuals of degree index `n = i + 1` over its `m` range, `x_residuals`
/// the matching `x`-side ones, `max_offdiag_rel` the largest index-side and
/// `max_diag_rel_err` the largest `x`-side residual.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub case_id: CaseId,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    pub expected_diag: Vec<f64>,
    pub x_residuals: Option<Vec<Vec<f64>>>,
    pub max_offdiag_rel: f64,
    pub max_diag_rel_err: f64,
    pub tol_off: f64,
    pub tol_diag: f64,
    pub pass: bool,
    pub errors: Vec<EntryError>,
    pub wall_time: f64,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Floats with 17 significant digits; non-finite values become `null`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

struct F17(f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = serde_json::value::RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn f17_vec(v: &[f64]) -> Vec<F17> {
    v.iter().map(|&x| F17(x)).collect()
}

fn f17_mat(m: &[Vec<f64>]) -> Vec<Vec<F17>> {
    m.iter().map(|r| f17_vec(r)).collect()
}

impl GramReport {
    /// JSON with every float at 17 significant digits. The wall time is left
    /// out unless asked for, so that repeated runs are byte-identical.
    pub fn to_json(&self, with_timing: bool) -> String {
        let report = ReportView { r: self, with_timing };
        serde_json::to_string_pretty(&report).expect("report serialization")
    }

    /// The matrix as RFC-4180 CSV with a header row.
    pub fn to_csv(&self) -> String {
        let cols = self.matrix.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = String::from("n");
        for m in 0..cols {
            out.push_str(&format!(",m{m}"));
        }
        out.push_str("\r\n");
        for (i, row) in self.matrix.iter().enumerate() {
            let n = if self.case_id.is_d_orthogonality() { i + 1 } else { i };
            out.push_str(&n.to_string());
            for v in row {
                out.push(',');
                out.push_str(&fmt17(*v));
            }
            out.push_str("\r\n");
        }
        out
    }
}

struct ReportView<'a> {
    r: &'a GramReport,
    with_timing: bool,
}

impl Serialize for ReportView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.r;
        let mut st = s.serialize_struct("GramReport", 14)?;
        st.serialize_field("schema_version", &REPORT_SCHEMA_VERSION)?;
        st.serialize_field("case", r.case_id.as_str())?;
        let params: BTreeMap<&str, F17> = r.params.iter().map(|(k, v)| (k.as_str(), F17(*v))).collect();
        st.serialize_field("params", &params)?;
        st.serialize_field("N", &r.n)?;
        st.serialize_field("matrix", &f17_mat(&r.matrix))?;
        st.serialize_field("expected_diag", &f17_vec(&r.expected_diag))?;
        if let Some(x) = &r.x_residuals {
            st.serialize_field("x_residuals", &f17_mat(x))?;
        }
        st.serialize_field("max_offdiag_rel", &F17(r.max_offdiag_rel))?;
        st.serialize_field("max_diag_rel_err", &F17(r.max_diag_rel_err))?;
        st.serialize_field("tol_off", &F17(r.tol_off))?;
        st.serialize_field("tol_diag", &F17(r.tol_diag))?;
        st.serialize_field("pass", &r.pass)?;
        st.serialize_field("errors", &r.errors)?;
        if self.with_timing {
            st.serialize_field("wall_time", &F17(r.wall_time))?;
        }
        st.end()
    }
}

/// Gram matrix of the case for degrees `0..N`, with the printed diagonal.
pub fn gram_matrix(case: &OrthoCase, size: usize) -> Result<GramReport> {
    let (tol_off, tol_diag) = case.id.default_tolerances();
    run(case, size, tol_off, tol_diag)
}

/// [`gram_matrix`] with explicit thresholds. Quadrature failures are recorded
/// in the report and make it fail; only invalid input is an error.
pub fn verify_case(case: &OrthoCase, size: usize, tol_off: f64, tol_diag: f64) -> Result<GramReport> {
    run(case, size, tol_off, tol_diag)
}

fn run(case: &OrthoCase, size: usize, tol_off: f64, tol_diag: f64) -> Result<GramReport> {
    case.validate()?;
    case.quad.validate()?;
    let cap = case.id.max_size(case.allow_expensive);
    if size == 0 || size > cap {
        return Err(Error::Domain(format!("{}: N must lie in 1..={cap}, got {size}", case.id)));
    }
    let start = Instant::now();
    if case.id.is_d_orthogonality() {
        let reports: Vec<DOrthReport> = (1..=size)
            .map(|n| d_orth_check(case.id, case.p("nu"), case.p("alpha"), n, &case.quad))
            .collect::<Result<_>>()?;
        let matrix: Vec<Vec<f64>> = reports.iter().map(|r| r.entries.iter().map(|e| e.tau_residual).collect()).collect();
        let x: Vec<Vec<f64>> = reports.iter().map(|r| r.entries.iter().map(|e| e.x_residual).collect()).collect();
        let worst = |m: &[Vec<f64>]| m.iter().flatten().fold(0f64, |a, &b| if b.is_nan() { f64::NAN } else { a.max(b) });
        let (off, diag) = (worst(&matrix), worst(&x));
        let errors: Vec<EntryError> = reports.iter().flat_map(|r| r.errors.clone()).collect();
        return Ok(GramReport {
            case_id: case.id,
            params: case.params.clone(),
            n: size,
            matrix,
            expected_diag: vec![],
            x_residuals: Some(x),
            max_offdiag_rel: off,
            max_diag_rel_err: diag,
            tol_off,
            tol_diag,
            pass: errors.is_empty() && off <= tol_off && diag <= tol_diag,
            errors,
            wall_time: start.elapsed().as_secs_f64(),
        });
    }
    let expected: Vec<f64> = (0..size).map(|n| expected_diagonal(case, n)).collect::<Result<_>>()?;
    let entries = routes::entries(case, size, &expected)?;
    let mut matrix = vec![vec![f64::NAN; size]; size];
    let mut errors = Vec::new();
    for ((n, m), r) in entries {
        match r {
            Ok(v) => matrix[n][m] = v,
            Err(e) => errors.push(EntryError { n, m, message: e.to_string() }),
        }
    }
    let mut off = 0f64;
    let mut diag = 0f64;
    for n in 0..size {
        for m in 0..size {
            let v = matrix[n][m];
            let err = if n == m {
                (v - expected[n]).abs() / expected[n].abs()
            } else {
                v.abs() / (expected[n] * expected[m]).abs().sqrt()
            };
            let slot = if n == m { &mut diag } else { &mut off };
            *slot = if err.is_nan() { f64::NAN } else { slot.max(err) };
        }
    }
    let pass = errors.is_empty() && off <= tol_off && diag <= tol_diag;
    Ok(GramReport {
        case_id: case.id,
        params: case.params.clone(),
        n: size,
        matrix,
        expected_diag: expected,
        x_residuals: None,
        max_offdiag_rel: off,
        max_diag_rel_err: diag,
        tol_off,
        tol_diag,
        pass,
        errors,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_two_cases_round_trip() {
        assert_eq!(CaseId::all().count(), 22);
        for c in CaseId::all() {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
        }
    }

    #[test]
    fn expected_diagonal_examples() {
        let v = expected_diagonal(&OrthoCase::new(CaseId::LaguerreIndex), 0).unwrap();
        assert!((v - PI * PI / 2.0).abs() < 1e-13);
        let v = expected_diagonal(&OrthoCase::new(CaseId::WilsonIndex).with_param("c", 1.0).unwrap().with_param("d", 1.0).unwrap(), 0)
            .unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
        let v = expected_diagonal(&OrthoCase::new(CaseId::Laguerre).with_param("alpha", 0.5).unwrap(), 2).unwrap();
        assert!((v - gamma(3.5).unwrap() / 2.0).abs() < 1e-14);
        let v = expected_diagonal(&OrthoCase::new(CaseId::CdhHatConv).with_param("c", 0.5).unwrap(), 0).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn laguerre_gram_is_identity() {
        let r = gram_matrix(&OrthoCase::new(CaseId::Laguerre), 3).unwrap();
        assert!(r.pass, "{}", r.to_json(false));
        for n in 0..3 {
            assert!((r.matrix[n][n] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn perturbed_expectation_fails() {
        let case = OrthoCase::new(CaseId::Laguerre);
        let mut r = gram_matrix(&case, 2).unwrap();
        assert!(r.pass);
        // threshold logic against a diagonal scaled by 1.01
        r.expected_diag.iter_mut().for_each(|e| *e *= 1.01);
        let worst = (0..2).map(|n| (r.matrix[n][n] - r.expected_diag[n]).abs() / r.expected_diag[n]).fold(0f64, f64::max);
        assert!(worst > r.tol_diag);
    }

    #[test]
    fn unknown_parameter_rejected() {
        assert!(OrthoCase::new(CaseId::Laguerre).with_param("nu", 1.0).is_err());
    }

    #[test]
    fn size_guard() {
        assert!(gram_matrix(&OrthoCase::new(CaseId::CdhHatConv), 3).is_err());
        assert!(gram_matrix(&OrthoCase::new(CaseId::Laguerre), 0).is_err());
    }

    #[test]
    fn report_json_is_deterministic_and_complete() {
        let r = gram_matrix(&OrthoCase::new(CaseId::Laguerre), 2).unwrap();
        let a = r.to_json(false);
        let b = gram_matrix(&OrthoCase::new(CaseId::Laguerre), 2).unwrap().to_json(false);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["case"], "LAG_2_4");
        assert_eq!(v["schema_version"], 1);
        assert!(v.get("wall_time").is_none());
        assert!(serde_json::from_str::<serde_json::Value>(&r.to_json(true)).unwrap().get("wall_time").is_some());
        assert!(r.to_csv().starts_with("n,m0,m1\r\n0,"));
    }
}

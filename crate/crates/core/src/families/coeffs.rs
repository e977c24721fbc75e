use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde_json::Value;
use std::path::Path;

/// Monomial coefficients `row n = [c_{n,0}, …, c_{n,n}]` of a polynomial sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub family: String,
    rows: Vec<Vec<f64>>,
}

impl CoefficientTable {
    /// Checks that row `n` has exactly `n + 1` finite entries.
    pub fn new(family: impl Into<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        for (n, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::Schema { row: n, msg: format!("expected {} entries, found {}", n + 1, row.len()) });
            }
            if let Some(k) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::Schema { row: n, msg: format!("entry {k} is not finite") });
            }
        }
        Ok(Self { family: family.into(), rows })
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, n: usize) -> Result<&[f64]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingCoefficients(format!("row {n} of table '{}' ({} rows)", self.family, self.rows.len())))
    }

    /// `Σ_k c_{n,k} x^k`.
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.row(n)?.iter().rev().fold(0.0, |acc, c| acc * x + c))
    }

    /// Parses `{"family": "...", "rows": [[...], ...]}`; entries may be JSON
    /// numbers or decimal strings.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema { row: 0, msg: format!("invalid JSON: {e}") })?;
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Schema { row: 0, msg: "missing string field 'family'".into() })?;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema { row: 0, msg: "missing array field 'rows'".into() })?;
        let mut parsed = Vec::with_capacity(rows.len());
        for (n, row) in rows.iter().enumerate() {
            let entries = row.as_array().ok_or_else(|| Error::Schema { row: n, msg: "row is not an array".into() })?;
            let mut out = Vec::with_capacity(entries.len());
            for (k, e) in entries.iter().enumerate() {
                let x = match e {
                    Value::Number(num) => num.as_f64(),
                    Value::String(s) => s.trim().parse::<f64>().ok(),
                    _ => None,
                };
                out.push(x.ok_or_else(|| Error::Schema { row: n, msg: format!("entry {k} is not a number: {e}") })?);
            }
            parsed.push(out);
        }
        Self::new(family, parsed)
    }

    /// Numbers are written in shortest round-trip form, so loading the output
    /// reproduces every entry bit for bit.
    pub fn to_json_string(&self) -> String {
        serde_json::json!({ "family": self.family, "rows": self.rows }).to_string()
    }
}

/// Reads a coefficient table from a JSON file.
pub fn load_coefficients(path: impl AsRef<Path>) -> Result<CoefficientTable> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    CoefficientTable::from_json_str(&text)
}

/// Monomial coefficients of the polynomials orthonormal under the moment
/// functional `x^k ↦ moments[k]`, through a Cholesky factor of the Hankel matrix.
///
/// Needs `2·rows - 1` moments. The Hankel matrix is equilibrated by its
/// diagonal first, which keeps the factor usable up to about degree 10 for
/// moments growing like products of gamma functions.
pub fn orthonormal_from_moments(family: impl Into<String>, moments: &[f64], rows: usize) -> Result<CoefficientTable> {
    if rows == 0 || moments.len() < 2 * rows - 1 {
        return Err(Error::Domain(format!("{rows} rows need {} moments, got {}", 2 * rows - 1, moments.len())));
    }
    let d: Vec<f64> = (0..rows).map(|i| 1.0 / moments[2 * i].sqrt()).collect();
    let scaled = DMatrix::from_fn(rows, rows, |i, j| moments[i + j] * d[i] * d[j]);
    let chol = scaled
        .cholesky()
        .ok_or_else(|| Error::Domain("moment matrix is not positive definite".into()))?;
    let inv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::Domain("singular Cholesky factor".into()))?;
    let table = (0..rows).map(|n| (0..=n).map(|k| inv[(n, k)] * d[k]).collect()).collect();
    CoefficientTable::new(family, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_table_parses() {
        let t = CoefficientTable::from_json_str(r#"{"family":"S39","rows":[[1]]}"#).unwrap();
        assert_eq!(t.row(0).unwrap(), &[1.0]);
        assert_eq!(t.family, "S39");
    }

    #[test]
    fn decimal_strings_accepted() {
        let t = CoefficientTable::from_json_str(r#"{"family":"x","rows":[["0.1"],[2, "-3.25e-1"]]}"#).unwrap();
        assert_eq!(t.row(1).unwrap(), &[2.0, -0.325]);
        assert_eq!(t.row(0).unwrap(), &[0.1]);
    }

    #[test]
    fn row_length_mismatch_names_row() {
        let e = CoefficientTable::from_json_str(r#"{"family":"x","rows":[[1],[1,2],[1,2]]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { row: 2, .. }), "{e:?}");
    }

    #[test]
    fn round_trip_is_exact() {
        let t = CoefficientTable::new("q", vec![vec![0.1], vec![1.0 / 3.0, -2e-17]]).unwrap();
        let back = CoefficientTable::from_json_str(&t.to_json_string()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn laguerre_from_moments() {
        // moments of e^{-x} are k!; orthonormal polynomials are ±L_n
        let m: Vec<f64> = (0..7).map(|k| (1..=k).map(|i| i as f64).product()).collect();
        let t = orthonormal_from_moments("laguerre", &m, 4).unwrap();
        for n in 0..4 {
            for x in [0.3, 1.7, 4.0] {
                let l = crate::families::laguerre(n, 0.0, x).unwrap();
                let p = t.eval(n, x).unwrap();
                assert!((p.abs() - l.abs()).abs() < 1e-12 * (1.0 + l.abs()), "n={n} x={x}: {p} vs {l}");
            }
        }
    }
}

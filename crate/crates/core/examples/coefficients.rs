//! Coefficient tables for the moment-defined polynomial families: generated
//! from moments, saved as JSON, read back and injected into a case.
//!
//! cargo run --release --example coefficients

use klortho::families::{orthonormal_from_moments, CoefficientTable};
use klortho::ortho::{coefficient_table, gram_matrix, CaseId, OrthoCase};
use std::sync::Arc;

fn main() -> klortho::Result<()> {
    // orthonormal polynomials for e^-x on (0, inf): moments k!
    let moments: Vec<f64> = (0..7).scan(1.0, |acc, k| {
        let m = *acc;
        *acc *= (k + 1) as f64;
        Some(m)
    })
    .collect();
    let laguerre = orthonormal_from_moments("laguerre", &moments, 4)?;
    for (n, row) in laguerre.rows().iter().enumerate() {
        println!("p_{n}: {row:.6?}");
    }

    let case = OrthoCase::new(CaseId::PrudnikovP);
    let table = coefficient_table(&case, 4)?;
    let json = table.to_json_string();
    println!("{json}");

    let back = Arc::new(CoefficientTable::from_json_str(&json)?);
    let r = gram_matrix(&case.with_coeffs(back), 4)?;
    println!("PRUD_3_1 with the saved table: pass {}, off {:.1e}", r.pass, r.max_offdiag_rel);
    Ok(())
}

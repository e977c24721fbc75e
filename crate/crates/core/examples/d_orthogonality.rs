//! d-orthogonality of the index polynomial families: residuals of the
//! index-side relation and of its x-space twin for each row.
//!
//! cargo run --release --example d_orthogonality

use klortho::ortho::{gram_matrix, CaseId, OrthoCase};

fn main() -> klortho::Result<()> {
    for id in [CaseId::DOrthEvenV, CaseId::DOrthEvenS, CaseId::DOrthOddV, CaseId::DOrthOddS] {
        let case = OrthoCase::new(id).with_param("nu", 0.5)?.with_param("alpha", 1.0)?;
        let r = gram_matrix(&case, 2)?;
        println!("{id}: pass {}, index residual {:.1e}, x residual {:.1e}", r.pass, r.max_offdiag_rel, r.max_diag_rel_err);
        for (row, twin) in r.matrix.iter().zip(r.x_residuals.iter().flatten()) {
            println!("  {}  x-space {}", sci(row), sci(twin));
        }
    }
    Ok(())
}

fn sci(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:9.1e}")).collect::<Vec<_>>().join(" ")
}

//! Gram matrices of the orthogonality relations, checked against their
//! closed-form diagonals. Pass case identifiers to pick cases; the default
//! runs the quick ones.
//!
//! cargo run --release --example gram -- LAG_2_4 CDH_2_10

use klortho::ortho::{gram_matrix, verify_case, CaseId, OrthoCase, Route};

fn main() -> klortho::Result<()> {
    let ids: Vec<CaseId> = {
        let args: Vec<String> = std::env::args().skip(1).collect();
        if args.is_empty() {
            vec![CaseId::Laguerre, CaseId::CdhHalf, CaseId::LaguerreIndex, CaseId::WilsonIndex]
        } else {
            args.iter().map(|a| a.parse()).collect::<klortho::Result<_>>()?
        }
    };
    for id in ids {
        let case = OrthoCase::new(id);
        let (tol_off, tol_diag) = id.default_tolerances();
        let r = verify_case(&case, id.default_size(), tol_off, tol_diag)?;
        println!(
            "{id:<12} N = {} {} off {:.1e} diag {:.1e} ({:.2} s)",
            r.n,
            if r.pass { "pass" } else { "FAIL" },
            r.max_offdiag_rel,
            r.max_diag_rel_err,
            r.wall_time
        );
    }

    // parameters are set by name; the alternate route swaps closed forms for quadrature
    let case = OrthoCase::new(CaseId::Laguerre).with_param("alpha", 0.5)?;
    println!("{}", gram_matrix(&case, 3)?.to_json(false));
    let alt = gram_matrix(&OrthoCase::new(CaseId::LaguerreIndex).with_route(Route::Alternate), 3)?;
    print!("{}", alt.to_csv());
    Ok(())
}

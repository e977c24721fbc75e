//! Numerical toolkit for the Kontorovich-Lebedev (KL) index transform.
//!
//! The crate evaluates the Macdonald function `K_{iτ}(x)` of purely imaginary
//! order, the KL transform and its inversion, the KL convolution, and a catalog
//! of orthogonality and convolution-orthogonality relations for Wilson,
//! continuous dual Hahn, Laguerre and Prudnikov-type families. Every closed form
//! is paired with an independent quadrature route so that the identities can be
//! checked numerically.
//!
//! Modules, bottom-up:
//!
//! - [`specfun`]: complex log-gamma, Pochhammer symbols, `pFq` sums, `K_ν`, `K_{iτ}`.
//! - [`quad`]: double-exponential engines for `(0, ∞)`, index integrals and 2-D integrals.
//! - [`kl`]: forward/inverse transform, Parseval residuals, composed representations.
//! - [`convolution`]: the KL convolution and its hat variant.
//! - [`families`]: polynomial and generated function families with their KL images.
//! - [`ortho`]: Gram-matrix harness for each named relation.
//! - [`cli`]: the `klortho` command-line front end.

pub mod cli;
pub mod convolution;
pub mod error;
pub mod families;
pub mod kl;
pub mod ortho;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("{what} did not converge (value {value:e}, error estimate {err:e})")]
    NonConvergence { what: &'static str, value: f64, err: f64 },

    #[error("argument outside the supported domain: {0}")]
    Domain(String),

    #[error("result overflowed: {0}")]
    Overflow(String),

    #[error("integrand has no declared decay: {0}")]
    MissingDecay(String),

    #[error("coefficient table required for {0}")]
    MissingCoefficients(String),

    #[error("coefficient table schema error at row {row}: {msg}")]
    Schema { row: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use num_complex::Complex64;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The parameter sits on an algebraic degeneracy where the requested
    /// object does not exist as a finite set.
    #[error("degenerate parameter alpha = {alpha}: {reason}")]
    DegenerateParameter { alpha: Complex64, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// The polynomial solver ran out of sweeps. The best iterate set and the
    /// scaled residual of each root are attached.
    #[error(
        "root solver did not converge after {sweeps} sweeps (worst scaled residual {worst:e})"
    )]
    NoConvergence {
        sweeps: usize,
        worst: f64,
        roots: Vec<Complex64>,
        residuals: Vec<f64>,
    },

    #[error("seed did not converge to root {root_index}")]
    BasinEscape { root_index: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

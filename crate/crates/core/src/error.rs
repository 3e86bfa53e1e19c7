use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain an operation accepts.
    #[error("{what} = {value} is outside the supported domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("gap height {value} at ({x}, {y}) is not positive")]
    NonPositiveGap { x: f64, y: f64, value: f64 },

    #[error("diffusion coefficient {value} in cell {cell} is not positive")]
    Ellipticity { cell: usize, value: f64 },

    #[error("quadrature did not reach tolerance after {panels} panels (last change {delta:e})")]
    Quadrature { panels: usize, delta: f64 },

    #[error("linear solver did not converge in {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Whether the failure came from numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Ellipticity { .. } | Error::Quadrature { .. } | Error::NonConvergence { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

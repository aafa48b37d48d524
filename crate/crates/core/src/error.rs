use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the flow estimation pipeline.
#[derive(Debug, Error)]
pub enum FlowError {
    /// Two grids that must share dimensions do not.
    #[error("shape error: {context}: {left_width}x{left_height} vs {right_width}x{right_height}")]
    ShapeMismatch {
        context: &'static str,
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },
    /// A grid has an unusable size (zero extent, too small for a stencil, ...).
    #[error("shape error: {0}")]
    InvalidShape(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("parameter error: {0}")]
    InvalidParameter(String),
    /// The iteration produced NaN or infinity.
    #[error("numerical instability at iteration {iteration}{}", level.map(|l| format!(" (pyramid level {l})")).unwrap_or_default())]
    NumericalInstability { iteration: usize, level: Option<usize> },
    #[error("format error: {0}")]
    Format(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("ingestion error: {path}: {reason}")]
    Ingestion { path: PathBuf, reason: String },
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("empty domain: {0}")]
    EmptyDomain(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl FlowError {
    pub(crate) fn shape(
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    ) -> Self {
        FlowError::ShapeMismatch {
            context,
            left_width: left.0,
            left_height: left.1,
            right_width: right.0,
            right_height: right.1,
        }
    }

    /// Attach a pyramid level to a numerical-instability error.
    pub fn at_level(self, level: usize) -> Self {
        match self {
            FlowError::NumericalInstability { iteration, .. } => {
                FlowError::NumericalInstability { iteration, level: Some(level) }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, FlowError>;

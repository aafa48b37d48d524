use std::sync::OnceLock;

use crate::error::{FlowError, Result};

/// Square filter kernel, applied as a correlation (not flipped).
///
/// Kernels built from an outer product keep their 1-D factors so that
/// [`convolve`](super::convolve) can run two cheap passes instead of one
/// full 2-D pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
    separable: Option<(Vec<f64>, Vec<f64>)>,
}

const BINOMIAL_5: [f64; 5] = [1.0 / 16.0, 4.0 / 16.0, 6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];
const SOBEL_DERIV: [f64; 3] = [-0.5, 0.0, 0.5];
const SOBEL_SMOOTH: [f64; 3] = [0.25, 0.5, 0.25];

impl Kernel {
    /// Row-major `size`×`size` weights, `weights[ky * size + kx]`.
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(FlowError::InvalidParameter(format!(
                "kernel size must be odd and positive, got {size}"
            )));
        }
        if weights.len() != size * size {
            return Err(FlowError::InvalidParameter(format!(
                "kernel of size {size} needs {} weights, got {}",
                size * size,
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(FlowError::InvalidParameter("kernel weights must be finite".into()));
        }
        Ok(Self { size, weights, separable: None })
    }

    /// Outer product `column[ky] * row[kx]`.
    pub fn separable(column: &[f64], row: &[f64]) -> Result<Self> {
        if column.len() != row.len() {
            return Err(FlowError::InvalidParameter(
                "separable factors must have equal length".into(),
            ));
        }
        let size = row.len();
        let weights = column
            .iter()
            .flat_map(|c| row.iter().map(move |r| c * r))
            .collect();
        let mut kernel = Self::new(size, weights)?;
        kernel.separable = Some((column.to_vec(), row.to_vec()));
        Ok(kernel)
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut weights = vec![0.0; size * size];
        if size % 2 == 1 {
            weights[(size / 2) * size + size / 2] = 1.0;
        }
        Self::new(size, weights)
    }

    /// 5×5 binomial approximation of a Gaussian: outer product of (1,4,6,4,1)/16.
    pub fn gaussian5() -> &'static Kernel {
        static K: OnceLock<Kernel> = OnceLock::new();
        K.get_or_init(|| Kernel::separable(&BINOMIAL_5, &BINOMIAL_5).expect("valid kernel"))
    }

    /// Sobel x-derivative scaled by 1/8, so a unit ramp in x yields 1.
    pub fn sobel_x() -> &'static Kernel {
        static K: OnceLock<Kernel> = OnceLock::new();
        K.get_or_init(|| Kernel::separable(&SOBEL_SMOOTH, &SOBEL_DERIV).expect("valid kernel"))
    }

    /// Sobel y-derivative scaled by 1/8.
    pub fn sobel_y() -> &'static Kernel {
        static K: OnceLock<Kernel> = OnceLock::new();
        K.get_or_init(|| Kernel::separable(&SOBEL_DERIV, &SOBEL_SMOOTH).expect("valid kernel"))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, kx: usize, ky: usize) -> f64 {
        self.weights[ky * self.size + kx]
    }

    pub(crate) fn factors(&self) -> Option<(&[f64], &[f64])> {
        self.separable.as_ref().map(|(c, r)| (c.as_slice(), r.as_slice()))
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// True for smoothing kernels (weights sum to one).
    pub fn is_normalized(&self) -> bool {
        (self.sum() - 1.0).abs() <= 1e-12
    }
}

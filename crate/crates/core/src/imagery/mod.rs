//! Grayscale image container and the numerical primitives shared by the
//! solvers: convolution, Sobel gradients, temporal difference, Gaussian
//! smoothing, bilinear sampling and flow-driven warping.
//!
//! Every border is handled by edge replication: indices outside the grid
//! are clamped to the nearest valid row or column.

mod kernel;
#[cfg(feature = "image-io")]
pub mod io;

pub use kernel::Kernel;

use crate::error::{FlowError, Result};
use crate::flow::FlowField;
use crate::rows::fill_rows;

/// Row-major grid of real intensities, nominally in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(FlowError::InvalidShape(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(FlowError::DegenerateInput(format!(
                "non-finite intensity at pixel ({}, {})",
                i % width,
                i / width
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        check_dims(width, height)?;
        let data = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, data)
    }

    /// Builder for internally produced grids whose values are known finite.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Pixel lookup with edge replication for out-of-range indices.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yc * self.width + xc]
    }

    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn transpose(&self) -> GrayImage {
        let mut data = Vec::with_capacity(self.data.len());
        for x in 0..self.width {
            for y in 0..self.height {
                data.push(self.get(x, y));
            }
        }
        GrayImage::from_raw(self.height, self.width, data)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GrayImage {
        GrayImage::from_raw(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn is_all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

pub(crate) fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(FlowError::InvalidShape(format!(
            "dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    Ok(())
}

/// Correlate `image` with `kernel`, replicating edge pixels.
///
/// Fails only when the kernel is larger than the image along both axes.
pub fn convolve(image: &GrayImage, kernel: &Kernel) -> Result<GrayImage> {
    let (w, h) = image.dims();
    if kernel.size() > w && kernel.size() > h {
        return Err(FlowError::DegenerateInput(format!(
            "{0}x{0} kernel larger than {w}x{h} image",
            kernel.size()
        )));
    }
    Ok(convolve_unchecked(image, kernel))
}

/// [`convolve`] without the size check; replication makes it total.
pub(crate) fn convolve_unchecked(image: &GrayImage, kernel: &Kernel) -> GrayImage {
    match kernel.factors() {
        Some((column, row)) => convolve_separable(image, column, row),
        None => convolve_full(image, kernel),
    }
}

fn convolve_full(image: &GrayImage, kernel: &Kernel) -> GrayImage {
    let (w, h) = image.dims();
    let r = kernel.radius() as isize;
    let size = kernel.size();
    let weights = kernel.weights();
    let data = fill_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for ky in 0..size {
                let sy = y as isize + ky as isize - r;
                for kx in 0..size {
                    let sx = x as isize + kx as isize - r;
                    acc += weights[ky * size + kx] * image.get_clamped(sx, sy);
                }
            }
            *out = acc;
        }
    });
    GrayImage::from_raw(w, h, data)
}

fn convolve_separable(image: &GrayImage, column: &[f64], row: &[f64]) -> GrayImage {
    let (w, h) = image.dims();
    let r = (row.len() / 2) as isize;
    let horizontal = fill_rows(w, h, |y, out| {
        for (x, o) in out.iter_mut().enumerate() {
            *o = row
                .iter()
                .enumerate()
                .map(|(k, wt)| wt * image.get_clamped(x as isize + k as isize - r, y as isize))
                .sum();
        }
    });
    let tmp = GrayImage::from_raw(w, h, horizontal);
    let data = fill_rows(w, h, |y, out| {
        for (x, o) in out.iter_mut().enumerate() {
            *o = column
                .iter()
                .enumerate()
                .map(|(k, wt)| wt * tmp.get_clamped(x as isize, y as isize + k as isize - r))
                .sum();
        }
    });
    GrayImage::from_raw(w, h, data)
}

/// 5×5 binomial Gaussian smoothing.
pub fn gaussian_smooth(image: &GrayImage) -> Result<GrayImage> {
    convolve(image, Kernel::gaussian5())
}

/// Normalized Sobel derivatives `(I_x, I_y)`.
pub fn spatial_gradients(image: &GrayImage) -> Result<(GrayImage, GrayImage)> {
    let (w, h) = image.dims();
    if w < 3 || h < 3 {
        return Err(FlowError::DegenerateInput(format!(
            "gradients need at least a 3x3 image, got {w}x{h}"
        )));
    }
    Ok((convolve(image, Kernel::sobel_x())?, convolve(image, Kernel::sobel_y())?))
}

/// `frame2 - frame1`, pixel by pixel.
pub fn temporal_gradient(frame1: &GrayImage, frame2: &GrayImage) -> Result<GrayImage> {
    if frame1.dims() != frame2.dims() {
        return Err(FlowError::shape("temporal gradient frames", frame1.dims(), frame2.dims()));
    }
    let data = frame1.data.iter().zip(&frame2.data).map(|(a, b)| b - a).collect();
    Ok(GrayImage::from_raw(frame1.width, frame1.height, data))
}

/// The three derivative grids of the brightness-constancy constraint.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub ix: GrayImage,
    pub iy: GrayImage,
    pub it: GrayImage,
}

impl Gradients {
    /// Spatial derivatives from `frame1` only, temporal from the difference.
    pub fn compute(frame1: &GrayImage, frame2: &GrayImage) -> Result<Self> {
        let it = temporal_gradient(frame1, frame2)?;
        let (ix, iy) = spatial_gradients(frame1)?;
        Ok(Self { ix, iy, it })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.ix.dims()
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.iy.dims() != self.ix.dims() {
            return Err(FlowError::shape("gradient grids", self.ix.dims(), self.iy.dims()));
        }
        if self.it.dims() != self.ix.dims() {
            return Err(FlowError::shape("gradient grids", self.ix.dims(), self.it.dims()));
        }
        Ok(())
    }
}

/// Bilinear interpolation at a real-valued position, clamped to the grid.
pub fn bilinear_sample(image: &GrayImage, x: f64, y: f64) -> f64 {
    let (w, h) = image.dims();
    let (i, a) = cell(x, w);
    let (j, b) = cell(y, h);
    let i1 = (i + 1).min(w - 1);
    let j1 = (j + 1).min(h - 1);
    (1.0 - a) * (1.0 - b) * image.get(i, j)
        + a * (1.0 - b) * image.get(i1, j)
        + (1.0 - a) * b * image.get(i, j1)
        + a * b * image.get(i1, j1)
}

/// Lower cell index and fractional offset of `coord` along an axis of
/// length `len`. The last sample maps to `(len - 2, 1.0)` so that the
/// neighbour index always exists.
#[inline]
fn cell(coord: f64, len: usize) -> (usize, f64) {
    if len == 1 {
        return (0, 0.0);
    }
    let max = (len - 1) as f64;
    let c = if coord.is_nan() { 0.0 } else { coord.clamp(0.0, max) };
    let i = (c.floor() as usize).min(len - 2);
    (i, c - i as f64)
}

/// Inverse-mapping warp: `out(x, y) = image(x + u(x, y), y + v(x, y))`.
pub fn warp(image: &GrayImage, flow: &FlowField) -> Result<GrayImage> {
    if image.dims() != flow.dims() {
        return Err(FlowError::shape("warp image and flow", image.dims(), flow.dims()));
    }
    let (w, h) = image.dims();
    let data = fill_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let (u, v) = flow.at(x, y);
            *out = bilinear_sample(image, x as f64 + u, y as f64 + v);
        }
    });
    Ok(GrayImage::from_raw(w, h, data))
}

//! Dense flow fields: per-pixel displacements `(u, v)` in pixels.

use crate::error::{FlowError, Result};
use crate::imagery::{bilinear_sample, check_dims, GrayImage};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    width: usize,
    height: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl FlowField {
    pub fn new(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        if u.len() != n || v.len() != n {
            return Err(FlowError::InvalidShape(format!(
                "{width}x{height} flow needs {n} samples per channel, got {} and {}",
                u.len(),
                v.len()
            )));
        }
        if u.iter().chain(&v).any(|c| !c.is_finite()) {
            return Err(FlowError::DegenerateInput("non-finite flow component".into()));
        }
        Ok(Self { width, height, u, v })
    }

    /// All-zero field, the solvers' starting point.
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::constant(width, height, 0.0, 0.0)
    }

    pub fn constant(width: usize, height: usize, u: f64, v: f64) -> Result<Self> {
        check_dims(width, height)?;
        let n = width * height;
        Self::new(width, height, vec![u; n], vec![v; n])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> (f64, f64),
    ) -> Result<Self> {
        check_dims(width, height)?;
        let (u, v) = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .unzip();
        Self::new(width, height, u, v)
    }

    pub(crate) fn from_raw(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Self {
        debug_assert!(u.len() == width * height && v.len() == width * height);
        Self { width, height, u, v }
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

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.u[i], self.v[i])
    }

    pub fn set(&mut self, x: usize, y: usize, u: f64, v: f64) {
        let i = y * self.width + x;
        self.u[i] = u;
        self.v[i] = v;
    }

    /// Iterator over `(u, v)` pairs in row-major order.
    pub fn vectors(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u.iter().copied().zip(self.v.iter().copied())
    }

    pub fn is_all_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|c| c.is_finite())
    }

    /// Component-wise sum of two fields of equal size.
    pub fn add(&self, other: &FlowField) -> Result<FlowField> {
        self.check_same(other, "flow addition")?;
        let u = self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect();
        let v = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        Ok(FlowField::from_raw(self.width, self.height, u, v))
    }

    pub fn scaled(&self, su: f64, sv: f64) -> FlowField {
        FlowField::from_raw(
            self.width,
            self.height,
            self.u.iter().map(|c| c * su).collect(),
            self.v.iter().map(|c| c * sv).collect(),
        )
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.vectors().map(|(u, v)| u.hypot(v)).collect()
    }

    pub(crate) fn check_same(&self, other: &FlowField, context: &'static str) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(FlowError::shape(context, self.dims(), other.dims()));
        }
        Ok(())
    }

    pub(crate) fn channels(&self) -> (GrayImage, GrayImage) {
        (
            GrayImage::from_raw(self.width, self.height, self.u.clone()),
            GrayImage::from_raw(self.width, self.height, self.v.clone()),
        )
    }
}

/// Per-pixel validity flags; `false` pixels are excluded from metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityMask {
    width: usize,
    height: usize,
    valid: Vec<bool>,
}

impl ValidityMask {
    pub fn new(width: usize, height: usize, valid: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if valid.len() != width * height {
            return Err(FlowError::InvalidShape(format!(
                "{width}x{height} mask needs {} flags, got {}",
                width * height,
                valid.len()
            )));
        }
        Ok(Self { width, height, valid })
    }

    pub fn all_valid(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![true; width * height])
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn flags(&self) -> &[bool] {
        &self.valid
    }

    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        self.valid[y * self.width + x]
    }

    pub fn count_valid(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Pixel-wise conjunction.
    pub fn and(&self, other: &ValidityMask) -> Result<ValidityMask> {
        if self.dims() != other.dims() {
            return Err(FlowError::shape("mask intersection", self.dims(), other.dims()));
        }
        let valid = self.valid.iter().zip(&other.valid).map(|(a, b)| *a && *b).collect();
        Ok(ValidityMask { width: self.width, height: self.height, valid })
    }
}

/// Euclidean norm of the stacked change in `(u, v)` between two fields.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FlowDelta {
    pub l2_norm: f64,
}

pub fn flow_delta(before: &FlowField, after: &FlowField) -> Result<FlowDelta> {
    before.check_same(after, "flow delta")?;
    let sum: f64 = before
        .vectors()
        .zip(after.vectors())
        .map(|((u0, v0), (u1, v1))| (u1 - u0).powi(2) + (v1 - v0).powi(2))
        .sum();
    Ok(FlowDelta { l2_norm: sum.sqrt() })
}

/// Bilinear prolongation of a flow onto a finer grid.
///
/// Corner samples map onto corner samples (endpoint alignment). Each
/// component is then multiplied by the size ratio along its axis so the
/// displacements are expressed in destination pixels.
pub fn upsample_flow(flow: &FlowField, new_width: usize, new_height: usize) -> Result<FlowField> {
    check_dims(new_width, new_height)?;
    let (w, h) = flow.dims();
    if new_width < w || new_height < h {
        return Err(FlowError::shape("upsample target smaller than source", (new_width, new_height), (w, h)));
    }
    let step_x = axis_step(w, new_width);
    let step_y = axis_step(h, new_height);
    let scale_x = new_width as f64 / w as f64;
    let scale_y = new_height as f64 / h as f64;
    let (cu, cv) = flow.channels();
    let n = new_width * new_height;
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for y in 0..new_height {
        let sy = y as f64 * step_y;
        for x in 0..new_width {
            let sx = x as f64 * step_x;
            u.push(bilinear_sample(&cu, sx, sy) * scale_x);
            v.push(bilinear_sample(&cv, sx, sy) * scale_y);
        }
    }
    Ok(FlowField::from_raw(new_width, new_height, u, v))
}

fn axis_step(old: usize, new: usize) -> f64 {
    if old == 1 || new == 1 {
        0.0
    } else {
        (old - 1) as f64 / (new - 1) as f64
    }
}

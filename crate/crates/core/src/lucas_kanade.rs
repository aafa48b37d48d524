//! Local least-squares flow over square windows.
//!
//! Inside a window every pixel contributes one linearized brightness
//! constraint `I_x u + I_y v = −I_t`. Stacking them gives `A w = b`, solved
//! through the 2×2 normal equations `AᵀA w = Aᵀb`. Points whose structure
//! tensor `AᵀA` has a small minimum eigenvalue are rejected.

use crate::error::{FlowError, Result};
use crate::imagery::{GrayImage, Gradients};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LkParams {
    /// Window is `(2r + 1)²` pixels.
    pub window_radius: usize,
    /// Acceptance threshold on the smaller eigenvalue of `AᵀA`.
    pub min_eigenvalue: f64,
}

impl Default for LkParams {
    fn default() -> Self {
        Self { window_radius: 2, min_eigenvalue: 1e-4 }
    }
}

impl LkParams {
    pub fn validate(&self) -> Result<()> {
        if self.window_radius < 1 {
            return Err(FlowError::InvalidParameter("window radius must be at least 1".into()));
        }
        if self.min_eigenvalue.is_nan() || self.min_eigenvalue < 0.0 {
            return Err(FlowError::InvalidParameter("min eigenvalue must be non-negative".into()));
        }
        Ok(())
    }
}

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StructureTensor {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl StructureTensor {
    pub fn min_eigenvalue(&self) -> f64 {
        let mean = 0.5 * (self.xx + self.yy);
        let half_diff = 0.5 * (self.xx - self.yy);
        mean - half_diff.hypot(self.xy)
    }

    pub fn determinant(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// Closed-form solve through the adjugate. `None` when singular.
    pub fn solve(&self, bx: f64, by: f64) -> Option<(f64, f64)> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(((self.yy * bx - self.xy * by) / det, (self.xx * by - self.xy * bx) / det))
    }
}

/// `AᵀA` for the stacked gradient rows of a window.
///
/// # Panics
/// If the two patches differ in length.
pub fn structure_tensor(ix_patch: &[f64], iy_patch: &[f64]) -> StructureTensor {
    assert_eq!(ix_patch.len(), iy_patch.len(), "gradient patches must have equal size");
    ix_patch.iter().zip(iy_patch).fold(StructureTensor::default(), |acc, (&gx, &gy)| {
        StructureTensor { xx: acc.xx + gx * gx, xy: acc.xy + gx * gy, yy: acc.yy + gy * gy }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LkPoint {
    pub x: usize,
    pub y: usize,
    pub u: f64,
    pub v: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseFlow {
    pub points: Vec<LkPoint>,
}

impl SparseFlow {
    pub fn accepted(&self) -> impl Iterator<Item = &LkPoint> {
        self.points.iter().filter(|p| p.accepted)
    }

    /// `x,y,u,v,accepted` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,u,v,accepted\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{},{},{}\n", p.x, p.y, p.u, p.v, u8::from(p.accepted)));
        }
        out
    }
}

/// Solve the window centred on `(x, y)`. Window pixels that fall outside
/// the image are replicated from the border.
pub fn lk_solve_point(gradients: &Gradients, x: usize, y: usize, params: &LkParams) -> LkPoint {
    let r = params.window_radius as isize;
    let mut tensor = StructureTensor::default();
    let (mut sxt, mut syt) = (0.0, 0.0);
    for dy in -r..=r {
        for dx in -r..=r {
            let (px, py) = (x as isize + dx, y as isize + dy);
            let gx = gradients.ix.get_clamped(px, py);
            let gy = gradients.iy.get_clamped(px, py);
            let gt = gradients.it.get_clamped(px, py);
            tensor.xx += gx * gx;
            tensor.xy += gx * gy;
            tensor.yy += gy * gy;
            sxt += gx * gt;
            syt += gy * gt;
        }
    }
    let rejected = LkPoint { x, y, u: 0.0, v: 0.0, accepted: false };
    let lambda = tensor.min_eigenvalue();
    if !(lambda >= params.min_eigenvalue && lambda > 0.0) {
        return rejected;
    }
    match tensor.solve(-sxt, -syt) {
        Some((u, v)) if u.is_finite() && v.is_finite() => LkPoint { x, y, u, v, accepted: true },
        _ => rejected,
    }
}

/// Evaluate every `stride`-th pixel whose window lies fully inside the
/// image, in row-major order.
pub fn lk_solve_grid(
    frame1: &GrayImage,
    frame2: &GrayImage,
    stride: usize,
    params: &LkParams,
) -> Result<SparseFlow> {
    params.validate()?;
    if stride == 0 {
        return Err(FlowError::InvalidParameter("stride must be at least 1".into()));
    }
    if frame1.dims() != frame2.dims() {
        return Err(FlowError::shape("lk frames", frame1.dims(), frame2.dims()));
    }
    let gradients = Gradients::compute(frame1, frame2)?;
    let (w, h) = frame1.dims();
    let r = params.window_radius;
    if w < 2 * r + 1 || h < 2 * r + 1 {
        return Ok(SparseFlow::default());
    }
    let points = (r..h - r)
        .step_by(stride)
        .flat_map(|y| (r..w - r).step_by(stride).map(move |x| (x, y)))
        .map(|(x, y)| lk_solve_point(&gradients, x, y, params))
        .collect();
    Ok(SparseFlow { points })
}

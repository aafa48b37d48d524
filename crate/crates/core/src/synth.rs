//! Reproducible synthetic frame pairs with analytic ground truth.
//!
//! The texture is seeded uniform noise smoothed twice by the 5×5 binomial
//! kernel and stretched to `[0, 1]`. It is generated on a canvas padded by
//! the largest displacement in the scene, so the second frame is sampled
//! from real texture instead of replicated borders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FlowError, Result};
use crate::flow::FlowField;
use crate::imagery::{bilinear_sample, gaussian_smooth, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SceneKind {
    /// Every pixel moves by `(dx, dy)`.
    Translation { dx: f64, dy: f64 },
    /// Rotation about the frame center, counter-clockwise in image
    /// coordinates (y down), in degrees.
    Rotation { degrees: f64 },
    /// Scaling about the frame center.
    Zoom { factor: f64 },
}

impl SceneKind {
    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::Translation { .. } => "translation",
            SceneKind::Rotation { .. } => "rotation",
            SceneKind::Zoom { .. } => "zoom",
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SceneKind::Translation { dx, dy } => dx.is_finite() && dy.is_finite(),
            SceneKind::Rotation { degrees } => degrees.is_finite(),
            SceneKind::Zoom { factor } => factor.is_finite() && factor > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(FlowError::InvalidParameter(format!("invalid {} parameters: {self:?}", self.name())))
        }
    }

    /// Where the frame-1 point `(x, y)` lands in frame 2.
    fn forward(&self, x: f64, y: f64, cx: f64, cy: f64) -> (f64, f64) {
        match *self {
            SceneKind::Translation { dx, dy } => (x + dx, y + dy),
            SceneKind::Rotation { degrees } => {
                let (s, c) = degrees.to_radians().sin_cos();
                let (px, py) = (x - cx, y - cy);
                (cx + c * px - s * py, cy + s * px + c * py)
            }
            SceneKind::Zoom { factor } => (cx + factor * (x - cx), cy + factor * (y - cy)),
        }
    }

    /// Where the frame-2 point `(x, y)` came from in frame 1.
    fn backward(&self, x: f64, y: f64, cx: f64, cy: f64) -> (f64, f64) {
        match *self {
            SceneKind::Translation { dx, dy } => (x - dx, y - dy),
            SceneKind::Rotation { degrees } => {
                SceneKind::Rotation { degrees: -degrees }.forward(x, y, cx, cy)
            }
            SceneKind::Zoom { factor } => (cx + (x - cx) / factor, cy + (y - cy) / factor),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticScene {
    pub frame1: GrayImage,
    pub frame2: GrayImage,
    pub ground_truth: FlowField,
    pub kind: SceneKind,
}

/// Smoothed, contrast-stretched noise texture.
pub fn noise_texture(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..width * height).map(|_| rng.gen::<f64>()).collect();
    let noise = GrayImage::new(width, height, noise)?;
    let smooth = gaussian_smooth(&gaussian_smooth(&noise)?)?;
    let (lo, hi) = smooth
        .data()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if span <= 0.0 {
        return Ok(smooth);
    }
    Ok(smooth.map(|v| (v - lo) / span))
}

pub fn synthesize(kind: SceneKind, width: usize, height: usize, seed: u64) -> Result<SyntheticScene> {
    kind.validate()?;
    if width < 5 || height < 5 {
        return Err(FlowError::InvalidParameter(format!(
            "synthetic frames must be at least 5x5, got {width}x{height}"
        )));
    }
    let (cx, cy) = ((width - 1) as f64 / 2.0, (height - 1) as f64 / 2.0);
    let ground_truth = FlowField::from_fn(width, height, |x, y| {
        let (x, y) = (x as f64, y as f64);
        let (fx, fy) = kind.forward(x, y, cx, cy);
        (fx - x, fy - y)
    })?;

    // padding: the largest displacement either way, plus a little slack
    let reach = [(0.0, 0.0), ((width - 1) as f64, 0.0), (0.0, (height - 1) as f64), ((width - 1) as f64, (height - 1) as f64)]
        .iter()
        .map(|&(x, y)| {
            let (bx, by) = kind.backward(x, y, cx, cy);
            (bx - x).abs().max((by - y).abs())
        })
        .fold(0.0f64, f64::max);
    let margin = reach.ceil() as usize + 2;
    if margin > 4 * (width + height) {
        return Err(FlowError::InvalidParameter(format!(
            "motion of {reach:.1} px is too large for a {width}x{height} frame"
        )));
    }
    let canvas = noise_texture(width + 2 * margin, height + 2 * margin, seed)?;
    let m = margin as f64;
    let frame1 = GrayImage::from_fn(width, height, |x, y| canvas.get(x + margin, y + margin))?;
    let frame2 = GrayImage::from_fn(width, height, |x, y| {
        let (sx, sy) = kind.backward(x as f64, y as f64, cx, cy);
        bilinear_sample(&canvas, sx + m, sy + m)
    })?;
    Ok(SyntheticScene { frame1, frame2, ground_truth, kind })
}

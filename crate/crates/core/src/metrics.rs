//! Average angular error and end-point error between an estimated flow
//! and ground truth.

use crate::error::{FlowError, Result};
use crate::flow::{FlowField, ValidityMask};

/// Guard constant of the angular error.
pub const AAE_EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowErrorReport {
    pub aae_degrees: f64,
    pub epe_pixels: f64,
    /// Pixels that entered the averages.
    pub pixel_count: usize,
    pub masked_out: usize,
}

fn check_inputs(est: &FlowField, gt: &FlowField, mask: Option<&ValidityMask>) -> Result<usize> {
    est.check_same(gt, "estimate and ground truth")?;
    let count = match mask {
        Some(m) => {
            if m.dims() != est.dims() {
                return Err(FlowError::shape("validity mask", m.dims(), est.dims()));
            }
            m.count_valid()
        }
        None => est.len(),
    };
    if count == 0 {
        return Err(FlowError::EmptyDomain("no unmasked pixels to average"));
    }
    Ok(count)
}

fn masked_mean(
    est: &FlowField,
    gt: &FlowField,
    mask: Option<&ValidityMask>,
    per_pixel: impl Fn((f64, f64), (f64, f64)) -> f64,
) -> Result<f64> {
    let count = check_inputs(est, gt, mask)?;
    let sum: f64 = est
        .vectors()
        .zip(gt.vectors())
        .enumerate()
        .filter(|(i, _)| mask.is_none_or(|m| m.flags()[*i]))
        .map(|(_, (e, g))| per_pixel(e, g))
        .sum();
    Ok(sum / count as f64)
}

/// Angle between two vectors with the ε-guarded normalization
/// `(u·u_gt + v·v_gt) / (√(|w|² + ε) · √(|w_gt|² + ε) + ε)`, in radians.
/// The cosine is clamped to `[-1, 1]` before `acos`.
pub fn angular_error(est: (f64, f64), gt: (f64, f64), epsilon: f64) -> f64 {
    let dot = est.0 * gt.0 + est.1 * gt.1;
    let norm_est = (est.0 * est.0 + est.1 * est.1 + epsilon).sqrt();
    let norm_gt = (gt.0 * gt.0 + gt.1 * gt.1 + epsilon).sqrt();
    (dot / (norm_est * norm_gt + epsilon)).clamp(-1.0, 1.0).acos()
}

/// Mean angular error in degrees over unmasked pixels.
pub fn average_angular_error(est: &FlowField, gt: &FlowField, mask: Option<&ValidityMask>) -> Result<f64> {
    average_angular_error_with_epsilon(est, gt, mask, AAE_EPSILON)
}

pub fn average_angular_error_with_epsilon(
    est: &FlowField,
    gt: &FlowField,
    mask: Option<&ValidityMask>,
    epsilon: f64,
) -> Result<f64> {
    masked_mean(est, gt, mask, |e, g| angular_error(e, g, epsilon)).map(f64::to_degrees)
}

/// Mean Euclidean distance between estimated and true vectors, in pixels.
pub fn endpoint_error(est: &FlowField, gt: &FlowField, mask: Option<&ValidityMask>) -> Result<f64> {
    masked_mean(est, gt, mask, |e, g| (e.0 - g.0).hypot(e.1 - g.1))
}

pub fn evaluate_pair(est: &FlowField, gt: &FlowField, mask: Option<&ValidityMask>) -> Result<FlowErrorReport> {
    let pixel_count = check_inputs(est, gt, mask)?;
    Ok(FlowErrorReport {
        aae_degrees: average_angular_error(est, gt, mask)?,
        epe_pixels: endpoint_error(est, gt, mask)?,
        pixel_count,
        masked_out: est.len() - pixel_count,
    })
}

impl std::fmt::Display for FlowErrorReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "AAE (deg):   {:.4}", self.aae_degrees)?;
        writeln!(f, "EPE (px):    {:.4}", self.epe_pixels)?;
        writeln!(f, "pixels:      {}", self.pixel_count)?;
        write!(f, "masked out:  {}", self.masked_out)
    }
}

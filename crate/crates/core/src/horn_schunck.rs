//! Global dense flow: Horn-Schunck iteration with Gaussian-averaged
//! neighbourhood means.
//!
//! Each sweep replaces `u`, `v` by their 5×5 binomial averages `ū`, `v̄`
//! and then corrects every pixel along the image gradient:
//!
//! ```text
//! u ← ū − I_x (I_x ū + I_y v̄ + I_t) / (α² + I_x² + I_y² + ε)
//! v ← v̄ − I_y (I_x ū + I_y v̄ + I_t) / (α² + I_x² + I_y² + ε)
//! ```
//!
//! The averages are computed over the whole field before any pixel is
//! updated, so a sweep is a Jacobi step. Iteration stops once the L2 norm
//! of the stacked change drops below `convergence_threshold`, or after
//! `max_iterations` sweeps.

use crate::error::{FlowError, Result};
use crate::flow::{flow_delta, FlowField};
use crate::imagery::{convolve_unchecked, GrayImage, Gradients, Kernel};
use crate::rows::fill_rows;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsParams {
    /// Smoothness weight; enters the update denominator squared.
    pub alpha: f64,
    /// Division guard added to the denominator.
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Stop when the whole-field flow change falls below this.
    pub convergence_threshold: f64,
}

impl Default for HsParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            epsilon: 1e-8,
            max_iterations: 5000,
            convergence_threshold: 1e-5,
        }
    }
}

impl HsParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(FlowError::InvalidParameter(what.to_string()));
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad("alpha must be positive");
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad("epsilon must be positive");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if !(self.convergence_threshold > 0.0 && self.convergence_threshold.is_finite()) {
            return bad("convergence threshold must be positive");
        }
        Ok(())
    }
}

/// Summary of one solver run.
///
/// Energies are evaluated by [`hs_energy`] with `α²` as the smoothness
/// weight, the balance the update rule actually strikes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsTrace {
    pub iterations_run: usize,
    pub final_delta: f64,
    pub converged: bool,
    pub energy_initial: f64,
    pub energy_final: f64,
}

/// One Jacobi sweep of the update rule.
pub fn hs_update_step(flow: &FlowField, gradients: &Gradients, params: &HsParams) -> Result<FlowField> {
    gradients.check()?;
    if flow.dims() != gradients.dims() {
        return Err(FlowError::shape("flow and gradients", flow.dims(), gradients.dims()));
    }
    let (w, h) = flow.dims();
    let (u, v) = flow.channels();
    let u_bar = convolve_unchecked(&u, Kernel::gaussian5());
    let v_bar = convolve_unchecked(&v, Kernel::gaussian5());
    let alpha2 = params.alpha * params.alpha;
    let (ix, iy, it) = (gradients.ix.data(), gradients.iy.data(), gradients.it.data());
    let (ub, vb) = (u_bar.data(), v_bar.data());

    let correction = |i: usize| {
        let residual = ix[i] * ub[i] + iy[i] * vb[i] + it[i];
        let denom = alpha2 + ix[i] * ix[i] + iy[i] * iy[i] + params.epsilon;
        residual / denom
    };
    let new_u = fill_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let i = y * w + x;
            *out = ub[i] - ix[i] * correction(i);
        }
    });
    let new_v = fill_rows(w, h, |y, row| {
        for (x, out) in row.iter_mut().enumerate() {
            let i = y * w + x;
            *out = vb[i] - iy[i] * correction(i);
        }
    });
    Ok(FlowField::from_raw(w, h, new_u, new_v))
}

/// Discrete Horn-Schunck energy
/// `Σ (I_x u + I_y v + I_t)² + weight · (|∇u|² + |∇v|²)`
/// with forward differences (zero across the last row and column).
pub fn hs_energy(flow: &FlowField, gradients: &Gradients, weight: f64) -> Result<f64> {
    gradients.check()?;
    if flow.dims() != gradients.dims() {
        return Err(FlowError::shape("flow and gradients", flow.dims(), gradients.dims()));
    }
    let (w, h) = flow.dims();
    let mut data_term = 0.0;
    let mut smooth_term = 0.0;
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let (u, v) = flow.at(x, y);
            let r = gradients.ix.data()[i] * u + gradients.iy.data()[i] * v + gradients.it.data()[i];
            data_term += r * r;
            let (ux, vx) = flow.at((x + 1).min(w - 1), y);
            let (uy, vy) = flow.at(x, (y + 1).min(h - 1));
            smooth_term += (ux - u).powi(2) + (uy - u).powi(2) + (vx - v).powi(2) + (vy - v).powi(2);
        }
    }
    Ok(data_term + weight * smooth_term)
}

/// Iterate the update rule from `initial_flow` until convergence.
///
/// Spatial gradients come from `frame1`, the temporal one from
/// `frame2 - frame1`; both are computed once.
pub fn hs_solve(
    frame1: &GrayImage,
    frame2: &GrayImage,
    initial_flow: &FlowField,
    params: &HsParams,
) -> Result<(FlowField, HsTrace)> {
    params.validate()?;
    if frame1.dims() != frame2.dims() {
        return Err(FlowError::shape("hs frames", frame1.dims(), frame2.dims()));
    }
    if initial_flow.dims() != frame1.dims() {
        return Err(FlowError::shape("hs initial flow", initial_flow.dims(), frame1.dims()));
    }
    let gradients = Gradients::compute(frame1, frame2)?;
    hs_iterate(&gradients, initial_flow, params)
}

/// The iteration loop of [`hs_solve`] on precomputed gradients.
pub fn hs_iterate(
    gradients: &Gradients,
    initial_flow: &FlowField,
    params: &HsParams,
) -> Result<(FlowField, HsTrace)> {
    params.validate()?;
    let weight = params.alpha * params.alpha;
    let energy_initial = hs_energy(initial_flow, gradients, weight)?;

    let mut flow = initial_flow.clone();
    let mut iterations_run = 0;
    let mut final_delta = f64::INFINITY;
    let mut converged = false;
    while iterations_run < params.max_iterations {
        iterations_run += 1;
        let next = hs_update_step(&flow, gradients, params)?;
        let delta = flow_delta(&flow, &next)?.l2_norm;
        if !delta.is_finite() || !next.is_all_finite() {
            return Err(FlowError::NumericalInstability { iteration: iterations_run, level: None });
        }
        flow = next;
        final_delta = delta;
        if delta < params.convergence_threshold {
            converged = true;
            break;
        }
    }
    let energy_final = hs_energy(&flow, gradients, weight)?;
    Ok((
        flow,
        HsTrace { iterations_run, final_delta, converged, energy_initial, energy_final },
    ))
}

//! Coarse-to-fine Horn-Schunck.
//!
//! Flow is solved on the coarsest pyramid level from zero. At every finer
//! level the current estimate is prolonged, the second frame of that level
//! is warped toward the first with it, and Horn-Schunck (started at zero)
//! recovers the residual motion left after the warp. The level's flow is
//! the prolonged estimate plus that residual.

use crate::error::{FlowError, Result};
use crate::flow::{upsample_flow, FlowField};
use crate::horn_schunck::{hs_solve, HsParams, HsTrace};
use crate::imagery::{warp, GrayImage};
use crate::pyramid::build_pyramid;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MrParams {
    /// Requested pyramid depth; may be truncated for small images.
    pub levels: usize,
    pub hs: HsParams,
}

impl Default for MrParams {
    fn default() -> Self {
        Self { levels: 4, hs: HsParams::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelTrace {
    pub level: usize,
    pub trace: HsTrace,
}

/// Per-level solver traces, coarsest first.
#[derive(Debug, Clone, PartialEq)]
pub struct MrTrace {
    pub per_level: Vec<LevelTrace>,
    pub actual_levels: usize,
}

impl MrTrace {
    pub fn total_iterations(&self) -> usize {
        self.per_level.iter().map(|l| l.trace.iterations_run).sum()
    }

    pub fn all_converged(&self) -> bool {
        self.per_level.iter().all(|l| l.trace.converged)
    }
}

pub fn mrhs_solve(frame1: &GrayImage, frame2: &GrayImage, params: &MrParams) -> Result<(FlowField, MrTrace)> {
    if params.levels == 0 {
        return Err(FlowError::InvalidParameter("levels must be at least 1".into()));
    }
    params.hs.validate()?;
    if frame1.dims() != frame2.dims() {
        return Err(FlowError::shape("mrhs frames", frame1.dims(), frame2.dims()));
    }
    let pyr1 = build_pyramid(frame1, params.levels)?;
    let pyr2 = build_pyramid(frame2, params.levels)?;
    let coarsest = pyr1.num_levels() - 1;

    let (cw, ch) = pyr1.level(coarsest).dims();
    let (mut flow, trace) = hs_solve(
        pyr1.level(coarsest),
        pyr2.level(coarsest),
        &FlowField::zeros(cw, ch)?,
        &params.hs,
    )
    .map_err(|e| e.at_level(coarsest))?;
    let mut per_level = vec![LevelTrace { level: coarsest, trace }];

    for level in (0..coarsest).rev() {
        let target = pyr1.level(level);
        let (w, h) = target.dims();
        let prolonged = upsample_flow(&flow, w, h)?;
        let warped = warp(pyr2.level(level), &prolonged)?;
        let (residual, trace) = hs_solve(target, &warped, &FlowField::zeros(w, h)?, &params.hs)
            .map_err(|e| e.at_level(level))?;
        flow = prolonged.add(&residual)?;
        if !flow.is_all_finite() {
            return Err(FlowError::NumericalInstability { iteration: trace.iterations_run, level: Some(level) });
        }
        per_level.push(LevelTrace { level, trace });
    }

    let actual_levels = per_level.len();
    Ok((flow, MrTrace { per_level, actual_levels }))
}

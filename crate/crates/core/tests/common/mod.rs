//! Independent oracles shared by the integration tests. Nothing here
//! calls into the code paths it is used to check.

#![allow(dead_code, clippy::too_many_arguments, clippy::needless_range_loop)]

use denseflow::{FlowField, GrayImage};
use nalgebra::{DMatrix, DVector};

pub const BINOMIAL: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];

/// Direct 5×5 binomial average at `(x, y)` with clamped indices.
pub fn gaussian_at(values: &[f64], w: usize, h: usize, x: usize, y: usize) -> f64 {
    let mut acc = 0.0;
    for ky in 0..5 {
        for kx in 0..5 {
            let sx = (x as isize + kx as isize - 2).clamp(0, w as isize - 1) as usize;
            let sy = (y as isize + ky as isize - 2).clamp(0, h as isize - 1) as usize;
            acc += BINOMIAL[kx] * BINOMIAL[ky] / 256.0 * values[sy * w + sx];
        }
    }
    acc
}

/// Scalar transcription of one averaged Horn-Schunck sweep.
pub fn hs_step_oracle(
    u: &[f64],
    v: &[f64],
    ix: &[f64],
    iy: &[f64],
    it: &[f64],
    w: usize,
    h: usize,
    alpha: f64,
    eps: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut nu = vec![0.0; w * h];
    let mut nv = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let ub = gaussian_at(u, w, h, x, y);
            let vb = gaussian_at(v, w, h, x, y);
            let denom = alpha * alpha + ix[i] * ix[i] + iy[i] * iy[i] + eps;
            nu[i] = ub - ix[i] * (ix[i] * ub + iy[i] * vb + it[i]) / denom;
            nv[i] = vb - iy[i] * (ix[i] * ub + iy[i] * vb + it[i]) / denom;
        }
    }
    (nu, nv)
}

/// Least-squares solution of the stacked constraints `[ix iy] w = -it`
/// through an SVD of the full system.
pub fn lk_oracle(ix: &[f64], iy: &[f64], it: &[f64]) -> (f64, f64) {
    let n = ix.len();
    let a = DMatrix::from_fn(n, 2, |r, c| if c == 0 { ix[r] } else { iy[r] });
    let b = DVector::from_iterator(n, it.iter().map(|t| -t));
    let sol = a.svd(true, true).solve(&b, 1e-300).expect("svd solve");
    (sol[0], sol[1])
}

/// Per-pixel angular error with the guarded normalization, in degrees.
pub fn aae_oracle(est: &FlowField, gt: &FlowField, eps: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..est.len() {
        let (u, v) = (est.u()[i], est.v()[i]);
        let (ug, vg) = (gt.u()[i], gt.v()[i]);
        let num = u * ug + v * vg;
        let den = (u * u + v * v + eps).sqrt() * (ug * ug + vg * vg + eps).sqrt() + eps;
        let c = (num / den).clamp(-1.0, 1.0);
        total += c.acos() * 180.0 / std::f64::consts::PI;
    }
    total / est.len() as f64
}

pub fn epe_oracle(est: &FlowField, gt: &FlowField) -> f64 {
    let mut total = 0.0;
    for i in 0..est.len() {
        let du = est.u()[i] - gt.u()[i];
        let dv = est.v()[i] - gt.v()[i];
        total += (du * du + dv * dv).sqrt();
    }
    total / est.len() as f64
}

/// Mean end-point error over pixels at least `margin` from the border,
/// optionally restricted to pixels whose gradient magnitude exceeds the
/// median of the whole frame.
pub fn interior_epe(est: &FlowField, gt: &FlowField, margin: usize, texture: Option<&GrayImage>) -> f64 {
    let (w, h) = est.dims();
    let mags = texture.map(gradient_magnitude);
    let median = mags.as_ref().map(|m| {
        let mut s = m.clone();
        s.sort_by(f64::total_cmp);
        s[s.len() / 2]
    });
    let (mut sum, mut n) = (0.0, 0usize);
    for y in margin..h - margin {
        for x in margin..w - margin {
            if let (Some(m), Some(med)) = (&mags, median) {
                if m[y * w + x] <= med {
                    continue;
                }
            }
            let (u, v) = est.at(x, y);
            let (a, b) = gt.at(x, y);
            sum += ((u - a).powi(2) + (v - b).powi(2)).sqrt();
            n += 1;
        }
    }
    assert!(n > 0, "empty evaluation region");
    sum / n as f64
}

/// Central-difference gradient magnitude with clamped borders.
pub fn gradient_magnitude(img: &GrayImage) -> Vec<f64> {
    let (w, h) = img.dims();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let gx = img.get((x + 1).min(w - 1), y) - img.get(x.saturating_sub(1), y);
            let gy = img.get(x, (y + 1).min(h - 1)) - img.get(x, y.saturating_sub(1));
            out.push(0.5 * (gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Values on a 1/8 grid, for tests that need exact float arithmetic.
pub fn dyadic(k: i32) -> f64 {
    k as f64 / 8.0
}

//! Batch evaluation of single-level and multiresolution Horn-Schunck on
//! scenes in a Sintel-style directory tree.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{FlowError, Result};
use crate::flow::FlowField;
use crate::flow_io::{load_scene_pair_from, sintel_scene_dirs};
use crate::horn_schunck::{hs_solve, HsParams};
use crate::imagery::GrayImage;
use crate::metrics::{evaluate_pair, FlowErrorReport};
use crate::multiresolution::{mrhs_solve, MrParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DenseMethod {
    Hs,
    MrHs,
}

impl DenseMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DenseMethod::Hs => "hs",
            DenseMethod::MrHs => "mrhs",
        }
    }
}

/// Result of one dense estimate with the solver statistics that matter
/// for reporting.
#[derive(Debug, Clone)]
pub struct DenseEstimate {
    pub flow: FlowField,
    pub iterations: usize,
    pub converged: bool,
}

/// Run either solver from zero flow. `levels` is ignored for `Hs`.
pub fn estimate_dense(
    method: DenseMethod,
    frame1: &GrayImage,
    frame2: &GrayImage,
    hs: &HsParams,
    levels: usize,
) -> Result<DenseEstimate> {
    match method {
        DenseMethod::Hs => {
            let (w, h) = frame1.dims();
            let (flow, trace) = hs_solve(frame1, frame2, &FlowField::zeros(w, h)?, hs)?;
            Ok(DenseEstimate { flow, iterations: trace.iterations_run, converged: trace.converged })
        }
        DenseMethod::MrHs => {
            let (flow, trace) = mrhs_solve(frame1, frame2, &MrParams { levels, hs: *hs })?;
            Ok(DenseEstimate {
                iterations: trace.total_iterations(),
                converged: trace.all_converged(),
                flow,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkScene {
    pub name: String,
    /// Index `t` of the pair `(t, t + 1)`.
    pub frame: usize,
    pub levels: usize,
}

impl BenchmarkScene {
    pub fn new(name: impl Into<String>, frame: usize, levels: usize) -> Self {
        Self { name: name.into(), frame, levels }
    }
}

/// The four final-pass scenes, frame pairs and pyramid depths used for
/// the reference comparison.
pub fn reference_scenes() -> Vec<BenchmarkScene> {
    vec![
        BenchmarkScene::new("alley_1", 1, 4),
        BenchmarkScene::new("bamboo_2", 28, 4),
        BenchmarkScene::new("market_2", 41, 3),
        BenchmarkScene::new("mountain_1", 35, 4),
    ]
}

#[derive(Debug, Clone)]
pub struct BenchmarkRow {
    pub scene: String,
    pub frame: usize,
    pub method: DenseMethod,
    /// Pyramid depth actually requested (1 for plain HS).
    pub levels: usize,
    pub report: FlowErrorReport,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct BenchmarkFailure {
    pub scene: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    pub failures: Vec<BenchmarkFailure>,
}

pub const CSV_HEADER: &str = "scene,frame,method,levels,aae_deg,epe_px,iterations,converged";

impl BenchmarkReport {
    /// Mean AAE and EPE per method over the successful scenes.
    pub fn averages(&self) -> Vec<(DenseMethod, f64, f64)> {
        let mut out = Vec::new();
        for method in [DenseMethod::Hs, DenseMethod::MrHs] {
            let rows: Vec<_> = self.rows.iter().filter(|r| r.method == method).collect();
            if rows.is_empty() {
                continue;
            }
            let n = rows.len() as f64;
            let aae = rows.iter().map(|r| r.report.aae_degrees).sum::<f64>() / n;
            let epe = rows.iter().map(|r| r.report.epe_pixels).sum::<f64>() / n;
            out.push((method, aae, epe));
        }
        out
    }

    pub fn row(&self, scene: &str, method: DenseMethod) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.scene == scene && r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:.4},{:.4},{},{}",
                r.scene,
                r.frame,
                r.method.name(),
                r.levels,
                r.report.aae_degrees,
                r.report.epe_pixels,
                r.iterations,
                r.converged
            )
            .expect("writing to a String");
        }
        for (method, aae, epe) in self.averages() {
            writeln!(out, "average,,{},,{aae:.4},{epe:.4},,", method.name()).expect("writing to a String");
        }
        out
    }
}

/// Evaluate every scene with every method. Scenes that fail to load or
/// solve are collected in `failures`; the others still produce rows.
pub fn run_benchmark(
    root: &Path,
    pass: &str,
    scenes: &[BenchmarkScene],
    methods: &[DenseMethod],
    hs: &HsParams,
) -> Result<BenchmarkReport> {
    if scenes.is_empty() {
        return Err(FlowError::InvalidParameter("no scenes to benchmark".into()));
    }
    if methods.is_empty() {
        return Err(FlowError::InvalidParameter("no methods to benchmark".into()));
    }
    hs.validate()?;

    let results = map_scenes(scenes, |scene| run_scene(root, pass, scene, methods, hs));
    let mut report = BenchmarkReport::default();
    for (scene, result) in scenes.iter().zip(results) {
        match result {
            Ok(rows) => report.rows.extend(rows),
            Err(e) => report.failures.push(BenchmarkFailure { scene: scene.name.clone(), message: e.to_string() }),
        }
    }
    Ok(report)
}

fn run_scene(
    root: &Path,
    pass: &str,
    scene: &BenchmarkScene,
    methods: &[DenseMethod],
    hs: &HsParams,
) -> Result<Vec<BenchmarkRow>> {
    let (frames_dir, flow_dir) = sintel_scene_dirs(root, pass, &scene.name);
    let pair = load_scene_pair_from(frames_dir, flow_dir, scene.frame)?;
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let levels = if method == DenseMethod::Hs { 1 } else { scene.levels };
        let est = estimate_dense(method, &pair.frame1, &pair.frame2, hs, levels)?;
        let report = evaluate_pair(&est.flow, &pair.ground_truth.flow, Some(&pair.ground_truth.mask))?;
        rows.push(BenchmarkRow {
            scene: scene.name.clone(),
            frame: scene.frame,
            method,
            levels,
            report,
            iterations: est.iterations,
            converged: est.converged,
        });
    }
    Ok(rows)
}

#[cfg(feature = "parallel")]
fn map_scenes<T: Send>(scenes: &[BenchmarkScene], f: impl Fn(&BenchmarkScene) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    scenes.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_scenes<T>(scenes: &[BenchmarkScene], f: impl Fn(&BenchmarkScene) -> T) -> Vec<T> {
    scenes.iter().map(f).collect()
}

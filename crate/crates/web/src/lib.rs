//! Browser bindings. A [`Demo`] owns one synthetic frame pair; the page
//! asks it for dense flow, pyramid levels or sparse LK vectors and paints
//! the returned RGBA buffers onto canvases.

use denseflow::flow_io::flow_to_color;
use denseflow::metrics::evaluate_pair;
use denseflow::{
    build_pyramid, hs_solve, lk_solve_grid, mrhs_solve, synthesize, FlowField, GaussianPyramid, GrayImage, HsParams,
    LkParams, MrParams, SceneKind, SyntheticScene,
};
use wasm_bindgen::prelude::*;

fn gray_rgba(img: &GrayImage) -> Vec<u8> {
    img.data()
        .iter()
        .flat_map(|&v| {
            let g = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
            [g, g, g, 255]
        })
        .collect()
}

fn scene_kind(kind: &str, amount: f64) -> Result<SceneKind, String> {
    match kind {
        "translation" => Ok(SceneKind::Translation { dx: amount, dy: 0.5 * amount }),
        "rotation" => Ok(SceneKind::Rotation { degrees: amount }),
        "zoom" => Ok(SceneKind::Zoom { factor: 1.0 + amount / 100.0 }),
        other => Err(format!("unknown scene kind '{other}'")),
    }
}

#[wasm_bindgen]
pub struct Demo {
    scene: SyntheticScene,
    pyramid: GaussianPyramid,
    epe: f64,
    aae: f64,
    iterations: usize,
}

impl Demo {
    pub fn create(kind: &str, amount: f64, size: usize, seed: u64) -> Result<Demo, String> {
        let scene = synthesize(scene_kind(kind, amount)?, size, size, seed).map_err(|e| e.to_string())?;
        let pyramid = build_pyramid(&scene.frame1, 8).map_err(|e| e.to_string())?;
        Ok(Demo { scene, pyramid, epe: f64::NAN, aae: f64::NAN, iterations: 0 })
    }

    /// Dense flow rendered with the color wheel. `levels <= 1` runs plain HS.
    pub fn dense(&mut self, alpha: f64, levels: usize, max_iterations: usize) -> Result<Vec<u8>, String> {
        let hs = HsParams { alpha, max_iterations, ..HsParams::default() };
        let (f1, f2) = (&self.scene.frame1, &self.scene.frame2);
        let (flow, iterations) = if levels <= 1 {
            let (w, h) = f1.dims();
            let zero = FlowField::zeros(w, h).map_err(|e| e.to_string())?;
            let (flow, t) = hs_solve(f1, f2, &zero, &hs).map_err(|e| e.to_string())?;
            (flow, t.iterations_run)
        } else {
            let (flow, t) = mrhs_solve(f1, f2, &MrParams { levels, hs }).map_err(|e| e.to_string())?;
            (flow, t.total_iterations())
        };
        let report = evaluate_pair(&flow, &self.scene.ground_truth, None).map_err(|e| e.to_string())?;
        self.epe = report.epe_pixels;
        self.aae = report.aae_degrees;
        self.iterations = iterations;
        Ok(flow_to_color(&flow, None).to_rgba())
    }

    /// Flat `[x, y, u, v, ...]` for accepted points.
    pub fn sparse(&self, stride: usize, radius: usize) -> Result<Vec<f64>, String> {
        let params = LkParams { window_radius: radius, ..LkParams::default() };
        let flow = lk_solve_grid(&self.scene.frame1, &self.scene.frame2, stride, &params).map_err(|e| e.to_string())?;
        Ok(flow.accepted().flat_map(|p| [p.x as f64, p.y as f64, p.u, p.v]).collect())
    }

    pub fn level(&self, index: usize) -> Option<&GrayImage> {
        self.pyramid.levels().get(index)
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, amount: f64, size: usize, seed: u32) -> Result<Demo, JsError> {
        Demo::create(kind, amount, size, u64::from(seed)).map_err(|e| JsError::new(&e))
    }

    pub fn size(&self) -> usize {
        self.scene.frame1.width()
    }

    pub fn frame_rgba(&self, which: u8) -> Vec<u8> {
        gray_rgba(if which == 2 { &self.scene.frame2 } else { &self.scene.frame1 })
    }

    pub fn truth_rgba(&self) -> Vec<u8> {
        flow_to_color(&self.scene.ground_truth, None).to_rgba()
    }

    pub fn estimate(&mut self, alpha: f64, levels: usize, max_iterations: usize) -> Result<Vec<u8>, JsError> {
        self.dense(alpha, levels, max_iterations).map_err(|e| JsError::new(&e))
    }

    pub fn last_epe(&self) -> f64 {
        self.epe
    }

    pub fn last_aae(&self) -> f64 {
        self.aae
    }

    pub fn last_iterations(&self) -> usize {
        self.iterations
    }

    pub fn lk_vectors(&self, stride: usize, radius: usize) -> Result<Vec<f64>, JsError> {
        self.sparse(stride, radius).map_err(|e| JsError::new(&e))
    }

    pub fn pyramid_levels(&self) -> usize {
        self.pyramid.num_levels()
    }

    /// Width and height of a level, `[0, 0]` past the coarsest.
    pub fn level_dims(&self, index: usize) -> Vec<u32> {
        self.level(index).map_or(vec![0, 0], |l| vec![l.width() as u32, l.height() as u32])
    }

    pub fn level_rgba(&self, index: usize) -> Vec<u8> {
        self.level(index).map(gray_rgba).unwrap_or_default()
    }
}

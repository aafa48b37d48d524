//! Middlebury color-wheel rendering of flow fields.
//!
//! Direction picks a hue on a 55-entry wheel (red, yellow, green, cyan,
//! blue, magenta), magnitude fades from white toward the full hue.

use std::sync::OnceLock;

use crate::flow::FlowField;

pub const COLOR_WHEEL_SIZE: usize = 55;
const SEGMENTS: [usize; 6] = [15, 6, 4, 11, 13, 6];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowColorImage {
    pub width: usize,
    pub height: usize,
    /// Packed RGB triplets, row-major.
    pub rgb: Vec<u8>,
}

impl FlowColorImage {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    /// Expand to RGBA, e.g. for a browser canvas.
    pub fn to_rgba(&self) -> Vec<u8> {
        self.rgb.chunks_exact(3).flat_map(|p| [p[0], p[1], p[2], 255]).collect()
    }
}

fn color_wheel() -> &'static [[f64; 3]; COLOR_WHEEL_SIZE] {
    static WHEEL: OnceLock<[[f64; 3]; COLOR_WHEEL_SIZE]> = OnceLock::new();
    WHEEL.get_or_init(|| {
        let [ry, yg, gc, cb, bm, mr] = SEGMENTS;
        let mut wheel = [[0.0; 3]; COLOR_WHEEL_SIZE];
        let mut k = 0;
        let mut push = |c: [f64; 3]| {
            wheel[k] = c;
            k += 1;
        };
        for i in 0..ry {
            push([255.0, (255 * i / ry) as f64, 0.0]);
        }
        for i in 0..yg {
            push([(255 - 255 * i / yg) as f64, 255.0, 0.0]);
        }
        for i in 0..gc {
            push([0.0, 255.0, (255 * i / gc) as f64]);
        }
        for i in 0..cb {
            push([0.0, (255 - 255 * i / cb) as f64, 255.0]);
        }
        for i in 0..bm {
            push([(255 * i / bm) as f64, 0.0, 255.0]);
        }
        for i in 0..mr {
            push([255.0, 0.0, (255 - 255 * i / mr) as f64]);
        }
        wheel
    })
}

/// Fractional wheel index in `[0, COLOR_WHEEL_SIZE - 1]` for a direction.
pub fn wheel_position(u: f64, v: f64) -> f64 {
    let a = (-v).atan2(-u) / std::f64::consts::PI;
    (a + 1.0) / 2.0 * (COLOR_WHEEL_SIZE - 1) as f64
}

fn encode(u: f64, v: f64, radius: f64) -> [u8; 3] {
    let wheel = color_wheel();
    let saturation = (u.hypot(v) / radius).min(1.0);
    let fk = wheel_position(u, v);
    let k0 = (fk.floor() as usize).min(COLOR_WHEEL_SIZE - 1);
    let k1 = (k0 + 1) % COLOR_WHEEL_SIZE;
    let f = fk - k0 as f64;
    let mut out = [0u8; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let hue = ((1.0 - f) * wheel[k0][c] + f * wheel[k1][c]) / 255.0;
        let col = 1.0 - saturation * (1.0 - hue);
        *o = (255.0 * col).round().clamp(0.0, 255.0) as u8;
    }
    out
}

/// Render `flow` on the color wheel. Magnitudes are normalized by
/// `max_magnitude`, or by the field's 99th-percentile magnitude when absent.
pub fn flow_to_color(flow: &FlowField, max_magnitude: Option<f64>) -> FlowColorImage {
    let radius = max_magnitude
        .unwrap_or_else(|| percentile_magnitude(flow, 0.99))
        .max(1e-6);
    let rgb = flow.vectors().flat_map(|(u, v)| encode(u, v, radius)).collect();
    FlowColorImage { width: flow.width(), height: flow.height(), rgb }
}

fn percentile_magnitude(flow: &FlowField, q: f64) -> f64 {
    let mut mags = flow.magnitudes();
    mags.sort_by(f64::total_cmp);
    let rank = ((q * mags.len() as f64).ceil() as usize).clamp(1, mags.len());
    mags[rank - 1]
}

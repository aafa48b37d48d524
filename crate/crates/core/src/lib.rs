//! Classical optical flow: Lucas-Kanade, Horn-Schunck and coarse-to-fine
//! Horn-Schunck, with `.flo` interchange, color-wheel rendering and
//! AAE/EPE evaluation.
//!
//! Intensities are real numbers, nominally in `[0, 1]`. Flow vectors are
//! in pixels, `u` to the right and `v` downward, and follow the convention
//! `frame1(x, y) ≈ frame2(x + u, y + v)`.

pub mod error;
pub mod flow;
pub mod flow_io;
pub mod horn_schunck;
pub mod imagery;
pub mod lucas_kanade;
pub mod metrics;
pub mod multiresolution;
pub mod pyramid;
pub mod synth;
#[cfg(feature = "image-io")]
pub mod benchmark;

mod rows;

pub use error::{FlowError, Result};
pub use flow::{flow_delta, upsample_flow, FlowDelta, FlowField, ValidityMask};
pub use horn_schunck::{hs_energy, hs_iterate, hs_solve, hs_update_step, HsParams, HsTrace};
pub use imagery::{
    bilinear_sample, convolve, gaussian_smooth, spatial_gradients, temporal_gradient, warp, Gradients,
    GrayImage, Kernel,
};
pub use lucas_kanade::{lk_solve_grid, lk_solve_point, structure_tensor, LkParams, LkPoint, SparseFlow};
pub use metrics::{average_angular_error, endpoint_error, evaluate_pair, FlowErrorReport};
pub use multiresolution::{mrhs_solve, MrParams, MrTrace};
pub use pyramid::{build_pyramid, downsample2, GaussianPyramid};
pub use synth::{synthesize, SceneKind, SyntheticScene};

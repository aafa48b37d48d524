//! Flow interchange: Middlebury `.flo` files, color-wheel rendering and
//! Sintel-style scene directories.

mod color;
#[cfg(feature = "image-io")]
mod dataset;
mod flo;

pub use color::{flow_to_color, wheel_position, FlowColorImage, COLOR_WHEEL_SIZE};
#[cfg(feature = "image-io")]
pub use dataset::{frame_stem, load_scene_pair, load_scene_pair_from, sintel_scene_dirs, ScenePair};
pub use flo::{read_flo, read_flo_file, write_flo, write_flo_file, FloData, FLO_MAGIC, UNKNOWN_FLOW_THRESHOLD};

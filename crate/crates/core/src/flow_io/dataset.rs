use std::path::{Path, PathBuf};

use super::flo::{read_flo_file, FloData};
use crate::error::{FlowError, Result};
use crate::imagery::io::load_gray;
use crate::imagery::GrayImage;

/// Frames `t`, `t + 1` and the ground truth for frame `t`.
#[derive(Debug, Clone)]
pub struct ScenePair {
    pub frame1: GrayImage,
    pub frame2: GrayImage,
    pub ground_truth: FloData,
}

/// `frame_0007` for index 7.
pub fn frame_stem(index: usize) -> String {
    format!("frame_{index:04}")
}

/// Load a pair from a directory holding both `frame_%04d.png` and
/// `frame_%04d.flo`.
pub fn load_scene_pair(dir: impl AsRef<Path>, frame_index: usize) -> Result<ScenePair> {
    let dir = dir.as_ref();
    load_scene_pair_from(dir, dir, frame_index)
}

pub fn load_scene_pair_from(
    frames_dir: impl AsRef<Path>,
    flow_dir: impl AsRef<Path>,
    frame_index: usize,
) -> Result<ScenePair> {
    let frames_dir = frames_dir.as_ref();
    let frame_path = |i: usize| frames_dir.join(format!("{}.png", frame_stem(i)));
    let flo_path = flow_dir.as_ref().join(format!("{}.flo", frame_stem(frame_index)));
    for path in [frame_path(frame_index), frame_path(frame_index + 1), flo_path.clone()] {
        if !path.is_file() {
            return Err(FlowError::Ingestion { path, reason: "file not found".into() });
        }
    }
    let frame1 = load_gray(frame_path(frame_index))?;
    let frame2 = load_gray(frame_path(frame_index + 1))?;
    let ground_truth = read_flo_file(&flo_path)?;
    if frame1.dims() != frame2.dims() {
        return Err(FlowError::Consistency(format!(
            "frames differ in size: {}x{} vs {}x{}",
            frame1.width(),
            frame1.height(),
            frame2.width(),
            frame2.height()
        )));
    }
    if ground_truth.flow.dims() != frame1.dims() {
        return Err(FlowError::Consistency(format!(
            "frames are {}x{} but {} is {}x{}",
            frame1.width(),
            frame1.height(),
            flo_path.display(),
            ground_truth.flow.width(),
            ground_truth.flow.height()
        )));
    }
    Ok(ScenePair { frame1, frame2, ground_truth })
}

/// Resolve the frame and flow directories of a scene under a dataset root.
///
/// Accepted layouts, first match wins:
/// `root/training/<pass>/<scene>` with `root/training/flow/<scene>`,
/// `root/<pass>/<scene>` with `root/flow/<scene>`,
/// and a flat `root/<scene>` holding both.
pub fn sintel_scene_dirs(root: impl AsRef<Path>, pass: &str, scene: &str) -> (PathBuf, PathBuf) {
    let root = root.as_ref();
    for base in [root.join("training"), root.to_path_buf()] {
        let frames = base.join(pass).join(scene);
        if frames.is_dir() {
            return (frames, base.join("flow").join(scene));
        }
    }
    let flat = root.join(scene);
    (flat.clone(), flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowField;
    use crate::flow_io::write_flo_file;
    use crate::imagery::io::save_gray;

    fn fixture(dir: &Path, w: usize, h: usize, flo_w: usize) {
        let img = GrayImage::from_fn(w, h, |x, y| ((x + y) % 5) as f64 / 4.0).unwrap();
        save_gray(&img, dir.join("frame_0001.png")).unwrap();
        save_gray(&img, dir.join("frame_0002.png")).unwrap();
        write_flo_file(&FlowField::constant(flo_w, h, 1.0, 0.0).unwrap(), dir.join("frame_0001.flo")).unwrap();
    }

    #[test]
    fn loads_happy_path() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path(), 16, 8, 16);
        let pair = load_scene_pair(dir.path(), 1).unwrap();
        assert_eq!(pair.frame1.dims(), (16, 8));
        assert_eq!(pair.ground_truth.flow.at(3, 3), (1.0, 0.0));
    }

    #[test]
    fn index_past_the_end_is_ingestion_error() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path(), 16, 8, 16);
        let err = load_scene_pair(dir.path(), 2).unwrap_err();
        assert!(matches!(&err, FlowError::Ingestion { path, .. } if path.ends_with("frame_0003.png")), "{err}");
    }

    #[test]
    fn size_mismatch_is_consistency_error() {
        let dir = tempfile::tempdir().unwrap();
        fixture(dir.path(), 64, 32, 32);
        assert!(matches!(load_scene_pair(dir.path(), 1), Err(FlowError::Consistency(_))));
    }

    #[test]
    fn resolves_sintel_training_layout() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("training/final/alley_1")).unwrap();
        let (frames, flow) = sintel_scene_dirs(dir.path(), "final", "alley_1");
        assert!(frames.ends_with("training/final/alley_1"));
        assert!(flow.ends_with("training/flow/alley_1"));
        let (a, b) = sintel_scene_dirs(dir.path(), "final", "cave_2");
        assert_eq!(a, b);
    }
}

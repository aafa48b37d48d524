//! Gaussian pyramids: repeated 5×5 binomial smoothing followed by
//! factor-2 subsampling. Level 0 is the input image.

use crate::error::{FlowError, Result};
use crate::imagery::{gaussian_smooth, GrayImage};

/// Levels are never built below this size along either axis.
pub const MIN_LEVEL_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPyramid {
    levels: Vec<GrayImage>,
}

impl GaussianPyramid {
    pub fn levels(&self) -> &[GrayImage] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, index: usize) -> &GrayImage {
        &self.levels[index]
    }

    pub fn coarsest(&self) -> &GrayImage {
        self.levels.last().expect("pyramid has at least one level")
    }

    pub fn into_levels(self) -> Vec<GrayImage> {
        self.levels
    }
}

/// Keep every second pixel starting at index 0; odd sizes round up.
pub fn downsample2(image: &GrayImage) -> Result<GrayImage> {
    let (w, h) = image.dims();
    if w < 2 || h < 2 {
        return Err(FlowError::InvalidShape(format!("cannot halve a {w}x{h} image")));
    }
    let (nw, nh) = (w.div_ceil(2), h.div_ceil(2));
    let data = (0..nh)
        .flat_map(|j| (0..nw).map(move |i| (i, j)))
        .map(|(i, j)| image.get(2 * i, 2 * j))
        .collect();
    Ok(GrayImage::from_raw(nw, nh, data))
}

/// Build up to `requested_levels` levels, stopping early rather than
/// producing a level smaller than [`MIN_LEVEL_SIZE`] on either axis.
pub fn build_pyramid(image: &GrayImage, requested_levels: usize) -> Result<GaussianPyramid> {
    if requested_levels == 0 {
        return Err(FlowError::InvalidParameter("pyramid needs at least one level".into()));
    }
    let mut levels = vec![image.clone()];
    while levels.len() < requested_levels {
        let last = levels.last().expect("non-empty");
        let (w, h) = last.dims();
        if w.div_ceil(2) < MIN_LEVEL_SIZE || h.div_ceil(2) < MIN_LEVEL_SIZE {
            break;
        }
        let next = downsample2(&gaussian_smooth(last)?)?;
        levels.push(next);
    }
    Ok(GaussianPyramid { levels })
}

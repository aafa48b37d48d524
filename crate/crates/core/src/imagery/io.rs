//! Reading and writing 8-bit grayscale images (PNG, binary PGM).

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma, Rgb};

use super::GrayImage;
use crate::error::{FlowError, Result};

/// Decode an image file into `[0, 1]` intensities.
///
/// Color inputs are reduced with `0.299 R + 0.587 G + 0.114 B` before
/// dividing by 255.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|e| FlowError::Ingestion {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    Ok(from_dynamic(&img))
}

pub fn decode_gray(bytes: &[u8]) -> Result<GrayImage> {
    let img = image::load_from_memory(bytes).map_err(|e| FlowError::Format(e.to_string()))?;
    Ok(from_dynamic(&img))
}

fn from_dynamic(img: &DynamicImage) -> GrayImage {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = match img {
        DynamicImage::ImageLuma8(g) => g.as_raw().iter().map(|&v| v as f64 / 255.0).collect(),
        other => other
            .to_rgb8()
            .pixels()
            .map(|p| luminance(p.0) / 255.0)
            .collect(),
    };
    GrayImage::from_raw(w, h, data)
}

pub fn luminance([r, g, b]: [u8; 3]) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

/// Quantize `[0, 1]` intensities to 8 bits, clamping out-of-range values.
pub fn to_gray8(image: &GrayImage) -> Vec<u8> {
    image
        .data()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect()
}

/// Write an image as 8-bit grayscale; the format follows the extension.
pub fn save_gray(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(image.width() as u32, image.height() as u32, to_gray8(image))
            .expect("buffer length matches dimensions");
    buf.save(path).map_err(|e| FlowError::Ingestion {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

pub fn save_rgb(width: usize, height: usize, rgb: Vec<u8>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let buf: ImageBuffer<Rgb<u8>, Vec<u8>> =
        ImageBuffer::from_raw(width as u32, height as u32, rgb).ok_or_else(|| {
            FlowError::Encoding(format!("rgb buffer does not match {width}x{height}"))
        })?;
    buf.save(path).map_err(|e| FlowError::Ingestion {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_png_round_trip_is_normalized() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.png");
        let img = GrayImage::from_fn(4, 3, |x, y| (x * 3 + y) as f64 * 20.0 / 255.0).unwrap();
        save_gray(&img, &path).unwrap();
        let back = load_gray(&path).unwrap();
        assert_eq!(back.dims(), (4, 3));
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_pgm_is_read() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend([0u8, 51, 102, 255]);
        let img = decode_gray(&bytes).unwrap();
        assert_eq!(img.data(), &[0.0, 0.2, 0.4, 1.0]);
    }

    #[test]
    fn color_uses_luminance_weights() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.png");
        save_rgb(2, 1, vec![255, 0, 0, 10, 20, 30], &path).unwrap();
        let img = load_gray(&path).unwrap();
        assert!((img.get(0, 0) - 0.299).abs() < 1e-12);
        assert!((img.get(1, 0) - (0.299 * 10.0 + 0.587 * 20.0 + 0.114 * 30.0) / 255.0).abs() < 1e-12);
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_gray("/nonexistent/frame_0001.png").unwrap_err();
        assert!(err.to_string().contains("frame_0001.png"));
    }
}

//! Middlebury `.flo` layout, all little-endian:
//!
//! ```text
//! bytes 0..4    magic, the f32 202021.25 ("PIEH")
//! bytes 4..8    width  (i32)
//! bytes 8..12   height (i32)
//! bytes 12..    width*height interleaved (u, v) f32 pairs, row-major
//! ```

use std::path::Path;

use crate::error::{FlowError, Result};
use crate::flow::{FlowField, ValidityMask};

pub const FLO_MAGIC: [u8; 4] = *b"PIEH";
/// Components above this magnitude mark unknown flow.
pub const UNKNOWN_FLOW_THRESHOLD: f64 = 1e9;
const HEADER_LEN: usize = 12;

/// A decoded `.flo` file. Unknown pixels are zeroed in `flow` and flagged
/// invalid in `mask`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloData {
    pub flow: FlowField,
    pub mask: ValidityMask,
}

impl FloData {
    pub fn has_unknown(&self) -> bool {
        self.mask.count_valid() < self.flow.len()
    }
}

pub fn read_flo(bytes: &[u8]) -> Result<FloData> {
    if bytes.len() < HEADER_LEN {
        return Err(FlowError::Format(format!(
            "truncated header: expected {HEADER_LEN} bytes, got {}",
            bytes.len()
        )));
    }
    if bytes[0..4] != FLO_MAGIC {
        return Err(FlowError::Format(format!("bad magic {:?}, expected \"PIEH\"", &bytes[0..4])));
    }
    let width = i32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    let height = i32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if width <= 0 || height <= 0 {
        return Err(FlowError::Format(format!("invalid dimensions {width}x{height}")));
    }
    let (w, h) = (width as usize, height as usize);
    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| FlowError::Format(format!("dimensions {w}x{h} overflow")))?;
    if bytes.len() != expected {
        return Err(FlowError::Format(format!(
            "payload size mismatch for {w}x{h}: expected {expected} bytes, got {}",
            bytes.len()
        )));
    }

    let n = w * h;
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut valid = Vec::with_capacity(n);
    for pair in bytes[HEADER_LEN..].chunks_exact(8) {
        let pu = f32::from_le_bytes(pair[0..4].try_into().expect("4 bytes")) as f64;
        let pv = f32::from_le_bytes(pair[4..8].try_into().expect("4 bytes")) as f64;
        let known = pu.is_finite()
            && pv.is_finite()
            && pu.abs() <= UNKNOWN_FLOW_THRESHOLD
            && pv.abs() <= UNKNOWN_FLOW_THRESHOLD;
        if known {
            u.push(pu);
            v.push(pv);
        } else {
            u.push(0.0);
            v.push(0.0);
        }
        valid.push(known);
    }
    Ok(FloData {
        flow: FlowField::new(w, h, u, v)?,
        mask: ValidityMask::new(w, h, valid)?,
    })
}

/// Encode a flow as `.flo` bytes. Components are stored as `f32`.
pub fn write_flo(flow: &FlowField) -> Result<Vec<u8>> {
    let (w, h) = flow.dims();
    let (wi, hi) = match (i32::try_from(w), i32::try_from(h)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Err(FlowError::Encoding(format!("{w}x{h} exceeds the format's 32-bit size"))),
    };
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * flow.len());
    out.extend_from_slice(&FLO_MAGIC);
    out.extend_from_slice(&wi.to_le_bytes());
    out.extend_from_slice(&hi.to_le_bytes());
    for (i, (u, v)) in flow.vectors().enumerate() {
        let (fu, fv) = (u as f32, v as f32);
        if !fu.is_finite() || !fv.is_finite() {
            return Err(FlowError::Encoding(format!(
                "non-finite flow at pixel ({}, {})",
                i % w,
                i / w
            )));
        }
        out.extend_from_slice(&fu.to_le_bytes());
        out.extend_from_slice(&fv.to_le_bytes());
    }
    Ok(out)
}

pub fn read_flo_file(path: impl AsRef<Path>) -> Result<FloData> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| FlowError::Ingestion {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    read_flo(&bytes).map_err(|e| match e {
        FlowError::Format(msg) => FlowError::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_flo_file(flow: &FlowField, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_flo(flow)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn magic_is_the_float_tag() {
        assert_eq!(f32::from_le_bytes(FLO_MAGIC), 202021.25);
    }

    #[test]
    fn one_pixel_layout() {
        let flow = FlowField::new(1, 1, vec![1.0], vec![-2.0]).unwrap();
        let bytes = write_flo(&flow).unwrap();
        let expected: Vec<u8> = vec![
            b'P', b'I', b'E', b'H', // magic
            1, 0, 0, 0, // width
            1, 0, 0, 0, // height
            0x00, 0x00, 0x80, 0x3f, // 1.0f
            0x00, 0x00, 0x00, 0xc0, // -2.0f
        ];
        assert_eq!(bytes, expected);
        assert_eq!(read_flo(&expected).unwrap().flow, flow);
    }

    #[test]
    fn zero_two_by_two() {
        let bytes = write_flo(&FlowField::zeros(2, 2).unwrap()).unwrap();
        assert_eq!(bytes.len(), 12 + 2 * 2 * 2 * 4);
        assert!(bytes[12..].iter().all(|b| *b == 0));
    }

    #[test]
    fn bad_magic() {
        let mut bytes = write_flo(&FlowField::zeros(2, 2).unwrap()).unwrap();
        bytes[0..4].copy_from_slice(b"XXXX");
        assert!(matches!(read_flo(&bytes), Err(FlowError::Format(_))));
    }

    #[test]
    fn truncated_payload_reports_sizes() {
        let bytes = write_flo(&FlowField::zeros(3, 2).unwrap()).unwrap();
        let err = read_flo(&bytes[..bytes.len() - 4]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("format error"));
        assert!(msg.contains("60") && msg.contains("56"), "{msg}");
        assert!(read_flo(&bytes[..7]).is_err());
    }

    #[test]
    fn sentinel_becomes_mask() {
        let mut flow = FlowField::constant(2, 2, 0.5, 0.25).unwrap();
        flow.set(1, 0, 1e10, 1e10);
        let bytes = write_flo(&flow).unwrap();
        let data = read_flo(&bytes).unwrap();
        assert!(data.has_unknown());
        assert_eq!(data.mask.flags(), &[true, false, true, true]);
        assert_eq!(data.flow.at(1, 0), (0.0, 0.0));
    }

    #[test]
    fn non_finite_after_narrowing_is_rejected() {
        let flow = FlowField::constant(1, 1, 1e300, 0.0).unwrap();
        assert!(matches!(write_flo(&flow), Err(FlowError::Encoding(_))));
    }

    #[test]
    fn negative_dimensions() {
        let mut bytes = write_flo(&FlowField::zeros(1, 1).unwrap()).unwrap();
        bytes[4..8].copy_from_slice(&(-1i32).to_le_bytes());
        assert!(read_flo(&bytes).is_err());
    }
}

//! Image moments of binary masks and the per-frame subject statistics built on them.
//!
//! Coordinates are pixel indices: `x` is the column, `y` the row, origin top-left.

use thiserror::Error;

use crate::mask_pipeline::{BinaryMask, BoundingBox};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlobError {
    #[error("mask has no set pixels")]
    EmptyMask,
}

/// Raw moments up to first order and central moments of second order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m00: u64,
    pub m10: u64,
    pub m01: u64,
    pub mu20: f64,
    pub mu02: f64,
    pub mu11: f64,
}

impl Moments {
    pub fn centroid(&self) -> (f64, f64) {
        (
            self.m10 as f64 / self.m00 as f64,
            self.m01 as f64 / self.m00 as f64,
        )
    }
}

pub fn compute_moments(mask: &BinaryMask) -> Result<Moments, BlobError> {
    let (mut m00, mut m10, mut m01) = (0u64, 0u64, 0u64);
    let (mut m20, mut m02, mut m11) = (0u128, 0u128, 0u128);
    for (x, y) in mask.ones() {
        let (x, y) = (x as u64, y as u64);
        m00 += 1;
        m10 += x;
        m01 += y;
        m20 += (x * x) as u128;
        m02 += (y * y) as u128;
        m11 += (x * y) as u128;
    }
    if m00 == 0 {
        return Err(BlobError::EmptyMask);
    }
    // mu_pq * m00 is an integer; divide once at the end.
    let n = m00 as i128;
    let central =
        |raw: u128, a: u64, b: u64| (raw as i128 * n - a as i128 * b as i128) as f64 / n as f64;
    Ok(Moments {
        m00,
        m10,
        m01,
        mu20: central(m20, m10, m10),
        mu02: central(m02, m01, m01),
        mu11: central(m11, m10, m01),
    })
}

/// Where the subject is in one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobStats {
    pub frame_index: u64,
    pub timestamp_s: f64,
    pub area: u64,
    pub centroid: (f64, f64),
    pub mu20: f64,
    pub mu02: f64,
    pub mu11: f64,
    pub bbox: BoundingBox,
}

impl BlobStats {
    pub const CSV_HEADER: &'static str = "frame,timestamp,area,cx,cy,mu20,mu02,mu11";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.6},{},{:.4},{:.4},{:.4},{:.4},{:.4}",
            self.frame_index,
            self.timestamp_s,
            self.area,
            self.centroid.0,
            self.centroid.1,
            self.mu20,
            self.mu02,
            self.mu11
        )
    }
}

pub fn blob_stats(
    mask: &BinaryMask,
    frame_index: u64,
    timestamp_s: f64,
) -> Result<BlobStats, BlobError> {
    let moments = compute_moments(mask)?;
    let mut ones = mask.ones();
    let (x0, y0) = ones.next().ok_or(BlobError::EmptyMask)?;
    let mut bbox = BoundingBox {
        min_x: x0,
        min_y: y0,
        max_x: x0,
        max_y: y0,
    };
    for (x, y) in ones {
        bbox.min_x = bbox.min_x.min(x);
        bbox.max_x = bbox.max_x.max(x);
        bbox.max_y = y;
    }
    Ok(BlobStats {
        frame_index,
        timestamp_s,
        area: moments.m00,
        centroid: moments.centroid(),
        mu20: moments.mu20,
        mu02: moments.mu02,
        mu11: moments.mu11,
        bbox,
    })
}

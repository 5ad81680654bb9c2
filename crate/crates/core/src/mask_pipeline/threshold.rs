//! Difference image, histogram and Otsu threshold.

use num_bigint::{BigInt, BigUint};

use crate::frame_io::Frame;

use super::{BinaryMask, GrayImage, MaskError};

/// Per pixel `round((|dR| + |dG| + |dB|) / 3)`.
pub fn diff_magnitude(frame: &Frame, background: &Frame) -> Result<GrayImage, MaskError> {
    if frame.dims() != background.dims() {
        return Err(MaskError::DimensionMismatch {
            expected: background.dims(),
            got: frame.dims(),
        });
    }
    let values = frame
        .pixels
        .chunks_exact(3)
        .zip(background.pixels.chunks_exact(3))
        .map(|(a, b)| {
            let sum: u32 = a.iter().zip(b).map(|(&p, &q)| p.abs_diff(q) as u32).sum();
            // sum / 3 is never exactly a half, so (sum + 1) / 3 rounds to nearest
            ((sum + 1) / 3).min(255) as u8
        })
        .collect();
    GrayImage::new(frame.width, frame.height, values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram256 {
    pub counts: [u64; 256],
}

impl Default for Histogram256 {
    fn default() -> Self {
        Histogram256 { counts: [0; 256] }
    }
}

impl Histogram256 {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Histogram256 { counts }
    }

    pub fn of(gray: &GrayImage) -> Self {
        let mut h = Histogram256::default();
        for &v in &gray.values {
            h.counts[v as usize] += 1;
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Otsu's threshold. Class 0 holds values `< t` and class 1 values `>= t`;
/// the returned `t` maximizes `w0 * w1 * (mu0 - mu1)^2`, smallest `t` on ties.
/// When all mass sits in a single bin `v`, returns `v + 1` so nothing is
/// foreground (this can be 256 for `v = 255`).
pub fn otsu_threshold(hist: &Histogram256) -> Result<u16, MaskError> {
    let n = hist.total();
    if n == 0 {
        return Err(MaskError::EmptyHistogram);
    }
    let mut occupied = hist.counts.iter().enumerate().filter(|(_, &c)| c > 0);
    let first = occupied.next().map(|(v, _)| v).unwrap_or(0);
    if occupied.next().is_none() {
        return Ok(first as u16 + 1);
    }

    let sum: u128 = hist
        .counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u128 * c as u128)
        .sum();
    let (mut n0, mut s0) = (0u64, 0u128);
    // Scores are compared as exact fractions cross^2 / (n0 * n1); the common
    // 1/N^2 factor is dropped. cross = s0*N - S*n0 is the scaled mean gap.
    let mut best: Option<(u16, BigUint, BigUint)> = None;
    for t in 0..256usize {
        let n1 = n - n0;
        if n0 > 0 && n1 > 0 {
            let lhs = BigInt::from(s0) * BigInt::from(n);
            let rhs = BigInt::from(sum) * BigInt::from(n0);
            let cross = (lhs - rhs).magnitude().clone();
            let num = &cross * &cross;
            let den = BigUint::from(n0) * BigUint::from(n1);
            let better = match &best {
                None => true,
                Some((_, bn, bd)) => &num * bd > bn * &den,
            };
            if better {
                best = Some((t as u16, num, den));
            }
        }
        n0 += hist.counts[t];
        s0 += t as u128 * hist.counts[t] as u128;
    }
    Ok(best.map_or(0, |(t, _, _)| t))
}

/// Set bits where `value >= t`. Thresholds above 255 behave as 255.
pub fn apply_threshold(gray: &GrayImage, t: u16) -> BinaryMask {
    let t = t.min(255) as u8;
    let bits = gray.values.iter().map(|&v| v >= t).collect();
    BinaryMask::from_bits(gray.width, gray.height, bits).expect("gray image is consistent")
}

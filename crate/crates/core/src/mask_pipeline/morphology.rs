//! Binary erosion and dilation with a square structuring element.
//!
//! The element has side `2 * radius + 1`. Pixels outside the image count as
//! background for both operators, so erosion clears a `radius`-wide frame
//! along the border.

use super::{BinaryMask, MaskError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    /// Erode, then dilate.
    Open,
    /// Dilate, then erode.
    Close,
}

pub fn morphology(mask: &BinaryMask, op: MorphOp, radius: usize) -> Result<BinaryMask, MaskError> {
    if radius == 0 {
        return Err(MaskError::InvalidArgument("morphology radius 0".into()));
    }
    Ok(match op {
        MorphOp::Erode => erode(mask, radius),
        MorphOp::Dilate => dilate(mask, radius),
        MorphOp::Open => dilate(&erode(mask, radius), radius),
        MorphOp::Close => erode(&dilate(mask, radius), radius),
    })
}

pub fn erode(mask: &BinaryMask, radius: usize) -> BinaryMask {
    separable(mask, radius, Pass::Erode)
}

pub fn dilate(mask: &BinaryMask, radius: usize) -> BinaryMask {
    separable(mask, radius, Pass::Dilate)
}

#[derive(Clone, Copy)]
enum Pass {
    Erode,
    Dilate,
}

/// A square element factors into a horizontal and a vertical line.
fn separable(mask: &BinaryMask, radius: usize, pass: Pass) -> BinaryMask {
    let (w, h) = mask.dims();
    let mut line = Vec::with_capacity(w.max(h));
    let mut out_line = Vec::with_capacity(w.max(h));

    let mut horizontal = BinaryMask::new(w, h);
    for y in 0..h {
        line.clear();
        line.extend((0..w).map(|x| mask.get(x, y)));
        line_pass(&line, radius, pass, &mut out_line);
        for (x, &b) in out_line.iter().enumerate() {
            horizontal.set(x, y, b);
        }
    }
    let mut out = BinaryMask::new(w, h);
    for x in 0..w {
        line.clear();
        line.extend((0..h).map(|y| horizontal.get(x, y)));
        line_pass(&line, radius, pass, &mut out_line);
        for (y, &b) in out_line.iter().enumerate() {
            out.set(x, y, b);
        }
    }
    out
}

fn line_pass(line: &[bool], radius: usize, pass: Pass, out: &mut Vec<bool>) {
    let n = line.len();
    // prefix[i] = number of set entries in line[..i]
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for &b in line {
        prefix.push(prefix.last().unwrap() + b as usize);
    }
    out.clear();
    for i in 0..n {
        let lo = i.saturating_sub(radius);
        let hi = (i + radius + 1).min(n);
        let count = prefix[hi] - prefix[lo];
        out.push(match pass {
            Pass::Erode => i >= radius && i + radius < n && count == 2 * radius + 1,
            Pass::Dilate => count > 0,
        });
    }
}

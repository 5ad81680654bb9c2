use super::{round_to_u8, Frame, FrameIoError, Result};

/// Box-filter reduction by an integer factor. Output is
/// `ceil(w / factor) x ceil(h / factor)`; partial blocks at the right and
/// bottom edges average only the pixels they contain.
pub fn downscale_box(frame: &Frame, factor: usize) -> Result<Frame> {
    if factor == 0 {
        return Err(FrameIoError::InvalidArgument("downscale factor 0".into()));
    }
    if factor == 1 {
        return Ok(frame.clone());
    }
    let out_w = frame.width.div_ceil(factor);
    let out_h = frame.height.div_ceil(factor);
    let mut out = Frame::new(out_w, out_h).with_index(frame.frame_index, frame.timestamp_s);
    for oy in 0..out_h {
        let y_end = ((oy + 1) * factor).min(frame.height);
        for ox in 0..out_w {
            let x_end = ((ox + 1) * factor).min(frame.width);
            let mut sum = [0u32; 3];
            for y in oy * factor..y_end {
                for x in ox * factor..x_end {
                    let p = frame.pixel(x, y);
                    sum[0] += p[0] as u32;
                    sum[1] += p[1] as u32;
                    sum[2] += p[2] as u32;
                }
            }
            let n = ((y_end - oy * factor) * (x_end - ox * factor)) as f64;
            out.set_pixel(ox, oy, sum.map(|s| round_to_u8(s as f64 / n)));
        }
    }
    Ok(out)
}

/// Nearest-neighbor enlargement to `width x height`, where source pixel
/// `(x / factor, y / factor)` feeds destination `(x, y)`.
pub fn upscale_nearest(frame: &Frame, factor: usize, width: usize, height: usize) -> Result<Frame> {
    if factor == 0 {
        return Err(FrameIoError::InvalidArgument("upscale factor 0".into()));
    }
    if width.div_ceil(factor) != frame.width || height.div_ceil(factor) != frame.height {
        return Err(FrameIoError::DimensionMismatch {
            expected: (width.div_ceil(factor), height.div_ceil(factor)),
            got: frame.dims(),
        });
    }
    let mut out = Frame::new(width, height).with_index(frame.frame_index, frame.timestamp_s);
    for y in 0..height {
        for x in 0..width {
            out.set_pixel(x, y, frame.pixel(x / factor, y / factor));
        }
    }
    Ok(out)
}

use crate::frame_io::Frame;
use crate::mask_pipeline::BinaryMask;

use super::{ComposeError, StrobeSelection};

/// Paint each selected frame through its mask onto a copy of `background`,
/// in selection order, so later strobes cover earlier ones where they overlap.
/// `frames[i]` and `masks[i]` belong to `selection.chosen[i]`.
pub fn composite(
    background: &Frame,
    selection: &StrobeSelection,
    frames: &[Frame],
    masks: &[BinaryMask],
) -> Result<Frame, ComposeError> {
    let dims = background.dims();
    let mut out = background.clone();
    for (i, &index) in selection.chosen.iter().enumerate() {
        let (frame, mask) = match (frames.get(i), masks.get(i)) {
            (Some(f), Some(m)) if f.frame_index == index => (f, m),
            _ => return Err(ComposeError::MissingFrame(index)),
        };
        for got in [frame.dims(), mask.dims()] {
            if got != dims {
                return Err(ComposeError::DimensionMismatch {
                    expected: dims,
                    got,
                });
            }
        }
        for ((dst, src), &set) in out
            .pixels
            .chunks_exact_mut(3)
            .zip(frame.pixels.chunks_exact(3))
            .zip(mask.bits())
        {
            if set {
                dst.copy_from_slice(src);
            }
        }
    }
    Ok(out)
}

//! Frame-versus-background segmentation: difference image, histogram
//! threshold, morphological cleanup and single-blob extraction.

mod components;
mod mask;
mod morphology;
mod threshold;

use thiserror::Error;

pub use components::{
    connected_components, label_components, largest_blob, BoundingBox, Component, Labeling,
};
pub use mask::{BinaryMask, GrayImage};
pub use morphology::{dilate, erode, morphology, MorphOp};
pub use threshold::{apply_threshold, diff_magnitude, otsu_threshold, Histogram256};

#[derive(Debug, Error)]
pub enum MaskError {
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

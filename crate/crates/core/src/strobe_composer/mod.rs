//! Choosing which frames become strobes and painting them onto the background.

mod composite;
mod selection;

use thiserror::Error;

use crate::blob_analysis::BlobStats;
use crate::mask_pipeline::BinaryMask;

pub use composite::composite;
pub use selection::{
    default_spacing, select_frames_greedy, tune_spacing_for_count, SelectionStatus,
    StrobeSelection, MAX_BISECTION_STEPS,
};

#[derive(Debug, Error, PartialEq)]
pub enum ComposeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("no frame or mask supplied for selected frame {0}")]
    MissingFrame(u64),
}

#[derive(Debug, Clone)]
pub struct TrackEntry {
    pub stats: BlobStats,
    /// Subject mask at full frame resolution.
    pub mask: BinaryMask,
}

impl TrackEntry {
    pub fn frame_index(&self) -> u64 {
        self.stats.frame_index
    }
}

/// Temporally ordered subject observations of one clip.
#[derive(Debug, Clone)]
pub struct Track {
    width: usize,
    height: usize,
    entries: Vec<TrackEntry>,
}

impl Track {
    pub fn new(width: usize, height: usize) -> Self {
        Track {
            width,
            height,
            entries: Vec::new(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn diagonal(&self) -> f64 {
        (self.width as f64).hypot(self.height as f64)
    }

    pub fn entries(&self) -> &[TrackEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, frame_index: u64) -> Option<&TrackEntry> {
        self.entries
            .binary_search_by_key(&frame_index, |e| e.frame_index())
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn push(&mut self, stats: BlobStats, mask: BinaryMask) -> Result<(), ComposeError> {
        if mask.dims() != self.dims() {
            return Err(ComposeError::DimensionMismatch {
                expected: self.dims(),
                got: mask.dims(),
            });
        }
        if mask.is_empty() {
            return Err(ComposeError::InvalidArgument(format!(
                "empty mask for frame {}",
                stats.frame_index
            )));
        }
        if let Some(last) = self.entries.last() {
            if stats.frame_index <= last.frame_index() {
                return Err(ComposeError::InvalidArgument(format!(
                    "frame {} does not follow frame {}",
                    stats.frame_index,
                    last.frame_index()
                )));
            }
        }
        self.entries.push(TrackEntry { stats, mask });
        Ok(())
    }
}

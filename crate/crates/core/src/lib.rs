//! Stroboscopic composites from fixed-camera video.
//!
//! The pipeline learns a per-pixel Gaussian mixture background over the whole
//! clip, segments the moving subject in each frame, picks spatially separated
//! frames and paints the subject from each onto the learned background.

pub mod background_model;
pub mod blob_analysis;
pub mod cli;
pub mod frame_io;
pub mod mask_pipeline;
pub mod strobe_composer;
pub mod synthkit;

//! Per-pixel adaptive Gaussian mixture background model.
//!
//! Each pixel carries a small mixture of isotropic RGB Gaussians. The mixture
//! is updated online, one sample per frame; the heaviest components that
//! together hold at least `1 - c_f` of the weight describe the background.

mod mixture;
mod params;

use rayon::prelude::*;
use thiserror::Error;

use crate::frame_io::{round_to_u8, Frame};
use crate::mask_pipeline::BinaryMask;

pub use mixture::{GmmComponent, PixelClass, PixelMixture};
pub use params::{ModelParams, VARIANCE_MAX_FACTOR, VARIANCE_MIN};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("frame is {got:?} but model is {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("background model has not seen any frames")]
    ModelEmpty,
}

#[derive(Debug, Clone)]
pub struct BackgroundModel {
    width: usize,
    height: usize,
    grid: Vec<PixelMixture>,
    params: ModelParams,
    frames_seen: u64,
}

impl BackgroundModel {
    pub fn new(width: usize, height: usize, params: ModelParams) -> Result<Self, ModelError> {
        if width == 0 || height == 0 {
            return Err(ModelError::InvalidArgument(format!(
                "model dimensions must be positive, got {width}x{height}"
            )));
        }
        params.validate()?;
        Ok(BackgroundModel {
            width,
            height,
            grid: vec![PixelMixture::new(); width * height],
            params,
            frames_seen: 0,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn frames_seen(&self) -> u64 {
        self.frames_seen
    }

    pub fn mixture(&self, x: usize, y: usize) -> &PixelMixture {
        &self.grid[y * self.width + x]
    }

    /// Learning rate for the next frame. Until `1 / alpha` frames have been
    /// seen the rate is `1 / (t + 1)`, so early frames are averaged with equal
    /// weight instead of the first frame dominating the whole history.
    pub fn learning_rate(&self) -> f64 {
        self.params.alpha.max(1.0 / (self.frames_seen + 1) as f64)
    }

    /// Classify every pixel against the current model, then fold the frame in.
    /// The returned mask has a bit set for each foreground pixel.
    pub fn process_frame(&mut self, frame: &Frame) -> Result<BinaryMask, ModelError> {
        if frame.dims() != self.dims() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dims(),
                got: frame.dims(),
            });
        }
        let step = ModelParams {
            alpha: self.learning_rate(),
            ..self.params
        };
        let bits: Vec<bool> = self
            .grid
            .par_iter_mut()
            .zip(frame.pixels.par_chunks_exact(3))
            .map(|(mixture, px)| {
                let x = [px[0] as f64, px[1] as f64, px[2] as f64];
                mixture.update(&x, &step) == PixelClass::Foreground
            })
            .collect();
        self.frames_seen += 1;
        Ok(BinaryMask::from_bits(self.width, self.height, bits)
            .expect("grid and frame have equal dimensions"))
    }

    /// Mean of each pixel's heaviest component; pixels without components are black.
    pub fn background_image(&self) -> Result<Frame, ModelError> {
        if self.frames_seen == 0 {
            return Err(ModelError::ModelEmpty);
        }
        let mut frame = Frame::new(self.width, self.height);
        for (px, mixture) in frame.pixels.chunks_exact_mut(3).zip(&self.grid) {
            if let Some(c) = mixture.dominant() {
                for (dst, m) in px.iter_mut().zip(c.mean) {
                    *dst = round_to_u8(m);
                }
            }
        }
        Ok(frame)
    }
}

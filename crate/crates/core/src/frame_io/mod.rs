//! Pixel ingress and egress: Y4M video, PPM/PNG stills and image sequences,
//! BT.601 color conversion and box downscaling.

mod color;
mod image_file;
mod resize;
mod sequence;
mod y4m;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use color::{rgb_to_yuv, yuv_to_rgb};
pub use image_file::{read_image, write_gray_png, write_image, ImageFormat};
pub use resize::{downscale_box, upscale_nearest};
pub use sequence::{read_image_sequence, ImageSequence, SequencePattern};
pub use y4m::{parse_y4m_header, rgb_to_yuv420, Y4mReader, Y4mWriter, YuvFrame, MAX_DIMENSION};

/// Default frame rate when the source does not carry one.
pub const DEFAULT_FPS: u32 = 25;

#[derive(Debug, Error)]
pub enum FrameIoError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported chroma sampling {0:?}")]
    UnsupportedChroma(String),
    #[error("truncated frame {frame}: expected {expected} bytes, got {got}")]
    TruncatedFrame {
        frame: u64,
        expected: usize,
        got: usize,
    },
    #[error("missing FRAME marker before frame {0}")]
    MissingFrameMarker(u64),
    #[error("no frames found for pattern {0}")]
    NoFramesFound(String),
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("unsupported pixel format: {0}")]
    UnsupportedPixelFormat(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o failure on {path:?}: {source}")]
    IoFailure {
        path: Option<PathBuf>,
        #[source]
        source: io::Error,
    },
}

impl FrameIoError {
    pub(crate) fn io(path: impl Into<Option<PathBuf>>, source: io::Error) -> Self {
        FrameIoError::IoFailure {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, FrameIoError>;

/// Chroma sampling of a Y4M stream. Only the 4:2:0 family is accepted; the
/// siting variants are carried for round-tripping but decoded identically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Chroma {
    #[default]
    C420,
    C420Jpeg,
    C420Mpeg2,
    C420Paldv,
}

impl Chroma {
    pub fn token(self) -> &'static str {
        match self {
            Chroma::C420 => "420",
            Chroma::C420Jpeg => "420jpeg",
            Chroma::C420Mpeg2 => "420mpeg2",
            Chroma::C420Paldv => "420paldv",
        }
    }

    fn from_token(token: &str) -> Option<Self> {
        match token {
            "420" => Some(Chroma::C420),
            "420jpeg" => Some(Chroma::C420Jpeg),
            "420mpeg2" => Some(Chroma::C420Mpeg2),
            "420paldv" => Some(Chroma::C420Paldv),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoHeader {
    pub width: usize,
    pub height: usize,
    pub fps_num: u32,
    pub fps_den: u32,
    pub chroma: Chroma,
    /// Raw `I` token value, carried but never interpreted.
    pub interlace_tag: Option<String>,
}

impl VideoHeader {
    pub fn new(width: usize, height: usize, fps_num: u32, fps_den: u32) -> Self {
        VideoHeader {
            width,
            height,
            fps_num,
            fps_den,
            chroma: Chroma::default(),
            interlace_tag: None,
        }
    }

    pub fn timestamp(&self, frame_index: u64) -> f64 {
        timestamp(frame_index, self.fps_num, self.fps_den)
    }
}

pub fn timestamp(frame_index: u64, fps_num: u32, fps_den: u32) -> f64 {
    frame_index as f64 * fps_den as f64 / fps_num as f64
}

/// An 8-bit RGB raster, row-major, three bytes per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub frame_index: u64,
    pub timestamp_s: f64,
}

impl Frame {
    /// Black frame at index 0.
    pub fn new(width: usize, height: usize) -> Self {
        Frame {
            width,
            height,
            pixels: vec![0; width * height * 3],
            frame_index: 0,
            timestamp_s: 0.0,
        }
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        let mut pixels = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            pixels.extend_from_slice(&rgb);
        }
        Frame {
            width,
            height,
            pixels,
            frame_index: 0,
            timestamp_s: 0.0,
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height * 3 {
            return Err(FrameIoError::InvalidArgument(format!(
                "pixel buffer of {} bytes does not match {}x{} RGB",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Frame {
            width,
            height,
            pixels,
            frame_index: 0,
            timestamp_s: 0.0,
        })
    }

    pub fn with_index(mut self, frame_index: u64, timestamp_s: f64) -> Self {
        self.frame_index = frame_index;
        self.timestamp_s = timestamp_s;
        self
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }
}

/// Round half away from zero, then clamp to the 8-bit range.
#[inline]
pub fn round_to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

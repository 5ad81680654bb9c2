//! Binary PPM (P6) and 8-bit PNG stills.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{Frame, FrameIoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// Guess from the file extension; anything but `.ppm` is PNG.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("ppm") => ImageFormat::Ppm,
            _ => ImageFormat::Png,
        }
    }
}

pub fn write_image(frame: &Frame, path: &Path, format: ImageFormat) -> Result<()> {
    let io = |e| FrameIoError::io(path.to_path_buf(), e);
    let file = File::create(path).map_err(io)?;
    let mut out = BufWriter::new(file);
    match format {
        ImageFormat::Ppm => {
            write!(out, "P6\n{} {}\n255\n", frame.width, frame.height).map_err(io)?;
            out.write_all(&frame.pixels).map_err(io)?;
        }
        ImageFormat::Png => {
            encode_png(
                &mut out,
                frame.width,
                frame.height,
                png::ColorType::Rgb,
                &frame.pixels,
            )
            .map_err(|e| FrameIoError::io(path.to_path_buf(), e))?;
        }
    }
    out.flush().map_err(io)
}

/// Single-channel 8-bit PNG, used for mask dumps.
pub fn write_gray_png(path: &Path, width: usize, height: usize, values: &[u8]) -> Result<()> {
    let io = |e| FrameIoError::io(path.to_path_buf(), e);
    let file = File::create(path).map_err(io)?;
    let mut out = BufWriter::new(file);
    encode_png(&mut out, width, height, png::ColorType::Grayscale, values).map_err(io)?;
    out.flush().map_err(io)
}

fn encode_png<W: Write>(
    out: W,
    width: usize,
    height: usize,
    color: png::ColorType,
    data: &[u8],
) -> std::io::Result<()> {
    let mut encoder = png::Encoder::new(out, width as u32, height as u32);
    encoder.set_color(color);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(std::io::Error::other)?;
    writer
        .write_image_data(data)
        .map_err(std::io::Error::other)?;
    writer.finish().map_err(std::io::Error::other)
}

/// Read a P6 PPM or an 8-bit RGB/RGBA PNG, sniffed by magic bytes.
pub fn read_image(path: &Path) -> Result<Frame> {
    let bytes = fs::read(path).map_err(|e| FrameIoError::io(path.to_path_buf(), e))?;
    if bytes.starts_with(b"P6") {
        decode_ppm(&bytes)
    } else if bytes.starts_with(&[0x89, b'P', b'N', b'G']) {
        decode_png(&bytes)
    } else {
        Err(FrameIoError::UnsupportedPixelFormat(format!(
            "{} is neither P6 PPM nor PNG",
            path.display()
        )))
    }
}

fn decode_ppm(bytes: &[u8]) -> Result<Frame> {
    let malformed = |msg: &str| FrameIoError::MalformedHeader(format!("PPM: {msg}"));
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed("bad header field"))?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(malformed("zero dimension"));
    }
    if maxval != 255 {
        return Err(FrameIoError::UnsupportedPixelFormat(format!(
            "PPM maxval {maxval}"
        )));
    }
    if !bytes.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
        return Err(malformed("missing separator before raster"));
    }
    pos += 1;
    let len = width * height * 3;
    let raster = bytes
        .get(pos..pos + len)
        .ok_or_else(|| malformed("raster shorter than header claims"))?;
    Frame::from_pixels(width, height, raster.to_vec())
}

fn decode_png(bytes: &[u8]) -> Result<Frame> {
    let bad = |e: png::DecodingError| FrameIoError::MalformedHeader(format!("PNG: {e}"));
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(bad)?;
    let info = reader.info();
    let (width, height) = (info.width as usize, info.height as usize);
    let (color, depth) = (info.color_type, info.bit_depth);
    if depth != png::BitDepth::Eight {
        return Err(FrameIoError::UnsupportedPixelFormat(format!(
            "PNG bit depth {depth:?}"
        )));
    }
    let channels = match color {
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        other => {
            return Err(FrameIoError::UnsupportedPixelFormat(format!(
                "PNG color type {other:?}"
            )))
        }
    };
    let mut buf = vec![
        0u8;
        reader.output_buffer_size().ok_or_else(|| {
            FrameIoError::UnsupportedPixelFormat("PNG too large".into())
        })?
    ];
    let out = reader.next_frame(&mut buf).map_err(bad)?;
    let stride = out.line_size;
    let mut pixels = Vec::with_capacity(width * height * 3);
    for row in buf.chunks(stride).take(height) {
        for px in row[..width * channels].chunks_exact(channels) {
            pixels.extend_from_slice(&px[..3]);
        }
    }
    Frame::from_pixels(width, height, pixels)
}

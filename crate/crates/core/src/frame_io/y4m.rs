//! YUV4MPEG2 reader and writer, 8-bit 4:2:0 only.

use std::io::{BufRead, ErrorKind, Read, Write};

use super::color::{rgb_to_yuv, yuv_to_rgb};
use super::{round_to_u8, Chroma, Frame, FrameIoError, Result, VideoHeader, DEFAULT_FPS};

const MAGIC: &str = "YUV4MPEG2";
const FRAME_MARKER: &[u8] = b"FRAME";
const MAX_HEADER_LEN: usize = 4096;

/// Planar 4:2:0 picture: full-resolution luma, half-resolution Cb and Cr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YuvFrame {
    pub width: usize,
    pub height: usize,
    pub y: Vec<u8>,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
}

impl YuvFrame {
    pub fn chroma_dims(&self) -> (usize, usize) {
        (self.width / 2, self.height / 2)
    }

    /// Nearest-neighbor chroma upsampling: each chroma sample covers its 2x2 luma block.
    pub fn to_rgb(&self) -> Frame {
        let mut frame = Frame::new(self.width, self.height);
        let cw = self.width / 2;
        for y in 0..self.height {
            for x in 0..self.width {
                let ci = (y / 2) * cw + x / 2;
                let rgb = yuv_to_rgb(self.y[y * self.width + x], self.u[ci], self.v[ci]);
                frame.set_pixel(x, y, rgb);
            }
        }
        frame
    }
}

/// Convert an RGB frame to 4:2:0 using the forward BT.601 matrix, averaging
/// chroma over each 2x2 block. Width and height must be even.
pub fn rgb_to_yuv420(frame: &Frame) -> Result<YuvFrame> {
    let (w, h) = frame.dims();
    if w % 2 != 0 || h % 2 != 0 {
        return Err(FrameIoError::InvalidArgument(format!(
            "4:2:0 needs even dimensions, got {w}x{h}"
        )));
    }
    let (cw, ch) = (w / 2, h / 2);
    let mut y_plane = vec![0u8; w * h];
    let mut cb_sum = vec![0.0f64; cw * ch];
    let mut cr_sum = vec![0.0f64; cw * ch];
    for y in 0..h {
        for x in 0..w {
            let [luma, cb, cr] = rgb_to_yuv(frame.pixel(x, y));
            y_plane[y * w + x] = round_to_u8(luma);
            let ci = (y / 2) * cw + x / 2;
            cb_sum[ci] += cb;
            cr_sum[ci] += cr;
        }
    }
    Ok(YuvFrame {
        width: w,
        height: h,
        y: y_plane,
        u: cb_sum.iter().map(|s| round_to_u8(s / 4.0)).collect(),
        v: cr_sum.iter().map(|s| round_to_u8(s / 4.0)).collect(),
    })
}

/// Read bytes up to and including `\n`, giving up after `limit` bytes.
/// Returns the line without the terminator, and whether a terminator was seen.
fn read_line_bytes<R: BufRead>(reader: &mut R, limit: usize) -> std::io::Result<(Vec<u8>, bool)> {
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    while line.len() < limit {
        match reader.read(&mut byte) {
            Ok(0) => return Ok((line, false)),
            Ok(_) if byte[0] == b'\n' => return Ok((line, true)),
            Ok(_) => line.push(byte[0]),
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e),
        }
    }
    Ok((line, false))
}

/// Largest accepted width or height.
pub const MAX_DIMENSION: usize = 1 << 15;

fn parse_dim(token: &str, what: &str) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(v) if v > 0 && v <= MAX_DIMENSION => Ok(v),
        _ => Err(FrameIoError::MalformedHeader(format!(
            "bad {what} token {token:?}"
        ))),
    }
}

fn parse_rate(token: &str) -> Result<(u32, u32)> {
    let bad = || FrameIoError::MalformedHeader(format!("bad frame rate token F{token}"));
    let (num, den) = token.split_once(':').ok_or_else(bad)?;
    let num: u32 = num.parse().map_err(|_| bad())?;
    let den: u32 = den.parse().map_err(|_| bad())?;
    if num == 0 || den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

/// Parse the stream header line. Unknown tokens are ignored; a missing `C`
/// token means plain 4:2:0 and a missing `F` token means 25 fps.
pub fn parse_y4m_header<R: BufRead>(reader: &mut R) -> Result<VideoHeader> {
    let (line, terminated) =
        read_line_bytes(reader, MAX_HEADER_LEN).map_err(|e| FrameIoError::io(None, e))?;
    if !terminated {
        return Err(FrameIoError::MalformedHeader(
            "header is not newline-terminated".into(),
        ));
    }
    if !line.is_ascii() {
        return Err(FrameIoError::MalformedHeader("header is not ASCII".into()));
    }
    let line = std::str::from_utf8(&line).expect("ASCII is UTF-8");
    let mut tokens = line.split(' ').filter(|t| !t.is_empty());
    if tokens.next() != Some(MAGIC) {
        return Err(FrameIoError::MalformedHeader("bad magic".into()));
    }

    let (mut width, mut height) = (None, None);
    let (mut fps_num, mut fps_den) = (DEFAULT_FPS, 1);
    let mut chroma = Chroma::default();
    let mut interlace_tag = None;
    for token in tokens {
        let (key, value) = token.split_at(1);
        match key {
            "W" => width = Some(parse_dim(value, "width")?),
            "H" => height = Some(parse_dim(value, "height")?),
            "F" => (fps_num, fps_den) = parse_rate(value)?,
            "I" => interlace_tag = Some(value.to_string()),
            "C" => {
                chroma = Chroma::from_token(value)
                    .ok_or_else(|| FrameIoError::UnsupportedChroma(value.to_string()))?
            }
            _ => {}
        }
    }
    let width = width.ok_or_else(|| FrameIoError::MalformedHeader("missing W".into()))?;
    let height = height.ok_or_else(|| FrameIoError::MalformedHeader("missing H".into()))?;
    if width % 2 != 0 || height % 2 != 0 {
        return Err(FrameIoError::MalformedHeader(format!(
            "4:2:0 needs even dimensions, got {width}x{height}"
        )));
    }
    Ok(VideoHeader {
        width,
        height,
        fps_num,
        fps_den,
        chroma,
        interlace_tag,
    })
}

/// Sequential frame reader over a Y4M byte stream.
pub struct Y4mReader<R> {
    reader: R,
    header: VideoHeader,
    next_index: u64,
    done: bool,
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut reader: R) -> Result<Self> {
        let header = parse_y4m_header(&mut reader)?;
        Ok(Y4mReader {
            reader,
            header,
            next_index: 0,
            done: false,
        })
    }

    pub fn header(&self) -> &VideoHeader {
        &self.header
    }

    /// Read up to `len` bytes. The buffer grows with the data actually
    /// present, so a lying header cannot force a huge allocation.
    fn read_planes(&mut self, len: usize) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        (&mut self.reader)
            .take(len as u64)
            .read_to_end(&mut buf)
            .map_err(|e| FrameIoError::io(None, e))?;
        Ok(buf)
    }

    /// Next raw picture, or `None` on a clean end of stream.
    pub fn read_yuv_frame(&mut self) -> Result<Option<YuvFrame>> {
        if self.done {
            return Ok(None);
        }
        let index = self.next_index;
        let (marker, terminated) = read_line_bytes(&mut self.reader, MAX_HEADER_LEN)
            .map_err(|e| FrameIoError::io(None, e))?;
        if marker.is_empty() && !terminated {
            self.done = true;
            return Ok(None);
        }
        if !terminated || !marker.starts_with(FRAME_MARKER) {
            self.done = true;
            return Err(FrameIoError::MissingFrameMarker(index));
        }

        let (w, h) = (self.header.width, self.header.height);
        let luma_len = w * h;
        let chroma_len = (w / 2) * (h / 2);
        let expected = luma_len + 2 * chroma_len;
        let mut planes = self.read_planes(expected)?;
        let got = planes.len();
        if got < expected {
            self.done = true;
            return Err(FrameIoError::TruncatedFrame {
                frame: index,
                expected,
                got,
            });
        }
        let v = planes.split_off(luma_len + chroma_len);
        let u = planes.split_off(luma_len);
        self.next_index += 1;
        Ok(Some(YuvFrame {
            width: w,
            height: h,
            y: planes,
            u,
            v,
        }))
    }

    pub fn read_frame(&mut self) -> Result<Option<Frame>> {
        let index = self.next_index;
        Ok(self
            .read_yuv_frame()?
            .map(|yuv| yuv.to_rgb().with_index(index, self.header.timestamp(index))))
    }
}

impl<R: BufRead> Iterator for Y4mReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        self.read_frame().transpose()
    }
}

pub struct Y4mWriter<W> {
    writer: W,
    header: VideoHeader,
}

impl<W: Write> Y4mWriter<W> {
    pub fn new(mut writer: W, header: VideoHeader) -> Result<Self> {
        let interlace = header.interlace_tag.as_deref().unwrap_or("p");
        writeln!(
            writer,
            "{MAGIC} W{} H{} F{}:{} I{} C{}",
            header.width,
            header.height,
            header.fps_num,
            header.fps_den,
            interlace,
            header.chroma.token()
        )
        .map_err(|e| FrameIoError::io(None, e))?;
        Ok(Y4mWriter { writer, header })
    }

    pub fn write_yuv_frame(&mut self, frame: &YuvFrame) -> Result<()> {
        if (frame.width, frame.height) != (self.header.width, self.header.height) {
            return Err(FrameIoError::DimensionMismatch {
                expected: (self.header.width, self.header.height),
                got: (frame.width, frame.height),
            });
        }
        let io = |e| FrameIoError::io(None, e);
        self.writer.write_all(b"FRAME\n").map_err(io)?;
        self.writer.write_all(&frame.y).map_err(io)?;
        self.writer.write_all(&frame.u).map_err(io)?;
        self.writer.write_all(&frame.v).map_err(io)
    }

    pub fn write_frame(&mut self, frame: &Frame) -> Result<()> {
        self.write_yuv_frame(&rgb_to_yuv420(frame)?)
    }

    pub fn finish(mut self) -> Result<W> {
        self.writer.flush().map_err(|e| FrameIoError::io(None, e))?;
        Ok(self.writer)
    }
}

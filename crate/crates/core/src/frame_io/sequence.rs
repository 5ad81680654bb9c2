//! Numbered still-image sequences such as `frames/img_%04d.png`.

use std::fs;
use std::path::{Path, PathBuf};

use super::image_file::read_image;
use super::{timestamp, Frame, FrameIoError, Result};

/// A path pattern with exactly one printf-style integer placeholder
/// (`%d` or `%0Nd`) in its file name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePattern {
    dir: PathBuf,
    prefix: String,
    suffix: String,
    width: Option<usize>,
}

impl SequencePattern {
    pub fn parse(pattern: &str) -> Result<Self> {
        let path = Path::new(pattern);
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .ok_or_else(|| FrameIoError::InvalidArgument(format!("bad pattern {pattern:?}")))?;
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let bad = || {
            FrameIoError::InvalidArgument(format!(
                "pattern {pattern:?} needs exactly one %d or %0Nd placeholder"
            ))
        };
        let start = name.find('%').ok_or_else(bad)?;
        let rest = &name[start + 1..];
        let d_pos = rest.find('d').ok_or_else(bad)?;
        let spec = &rest[..d_pos];
        let width = if spec.is_empty() {
            None
        } else if spec.starts_with('0') && spec.len() > 1 {
            Some(spec[1..].parse::<usize>().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        let suffix = &rest[d_pos + 1..];
        if suffix.contains('%') {
            return Err(bad());
        }
        Ok(SequencePattern {
            dir,
            prefix: name[..start].to_string(),
            suffix: suffix.to_string(),
            width,
        })
    }

    pub fn path_for(&self, index: u64) -> PathBuf {
        let digits = match self.width {
            Some(w) => format!("{index:0w$}"),
            None => index.to_string(),
        };
        self.dir
            .join(format!("{}{}{}", self.prefix, digits, self.suffix))
    }

    fn index_of(&self, name: &str) -> Option<u64> {
        let digits = name
            .strip_prefix(&self.prefix)?
            .strip_suffix(&self.suffix)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let index: u64 = digits.parse().ok()?;
        (self.path_for(index).file_name()?.to_str()? == name).then_some(index)
    }

    /// Smallest index with an existing file.
    fn first_index(&self) -> Option<u64> {
        fs::read_dir(&self.dir)
            .ok()?
            .filter_map(|e| e.ok())
            .filter_map(|e| e.file_name().to_str().and_then(|n| self.index_of(n)))
            .min()
    }
}

/// Frames of a sequence in ascending index order, renumbered from 0.
pub struct ImageSequence {
    pattern: SequencePattern,
    next_file: u64,
    emitted: u64,
    fps: (u32, u32),
    dims: Option<(usize, usize)>,
    done: bool,
}

impl ImageSequence {
    pub fn pattern(&self) -> &SequencePattern {
        &self.pattern
    }
}

/// Open a sequence; files are read lazily from the first existing index
/// until the first gap.
pub fn read_image_sequence(pattern: &str, fps: (u32, u32)) -> Result<ImageSequence> {
    if fps.0 == 0 || fps.1 == 0 {
        return Err(FrameIoError::InvalidArgument(
            "frame rate must be positive".into(),
        ));
    }
    let pattern = SequencePattern::parse(pattern)?;
    let first = pattern
        .first_index()
        .ok_or_else(|| FrameIoError::NoFramesFound(pattern.path_for(0).display().to_string()))?;
    Ok(ImageSequence {
        pattern,
        next_file: first,
        emitted: 0,
        fps,
        dims: None,
        done: false,
    })
}

impl Iterator for ImageSequence {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let path = self.pattern.path_for(self.next_file);
        if !path.is_file() {
            self.done = true;
            return None;
        }
        let frame = match read_image(&path) {
            Ok(f) => f,
            Err(e) => {
                self.done = true;
                return Some(Err(e));
            }
        };
        match self.dims {
            None => self.dims = Some(frame.dims()),
            Some(expected) if expected != frame.dims() => {
                self.done = true;
                return Some(Err(FrameIoError::DimensionMismatch {
                    expected,
                    got: frame.dims(),
                }));
            }
            Some(_) => {}
        }
        let index = self.emitted;
        self.emitted += 1;
        self.next_file += 1;
        Some(Ok(
            frame.with_index(index, timestamp(index, self.fps.0, self.fps.1))
        ))
    }
}

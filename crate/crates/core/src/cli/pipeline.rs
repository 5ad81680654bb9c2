//! The two-pass strobe pipeline.
//!
//! Pass 1 streams the clip through the background model at reduced
//! resolution. Pass 2 re-reads the clip, segments each frame against the
//! learned background and builds the subject track. A final read pulls the
//! selected frames at full resolution for compositing.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use crate::background_model::BackgroundModel;
use crate::blob_analysis::{blob_stats, BlobStats};
use crate::frame_io::{
    downscale_box, read_image_sequence, timestamp, upscale_nearest, write_gray_png, write_image,
    Frame, FrameIoError, ImageFormat, Y4mReader,
};
use crate::mask_pipeline::{
    apply_threshold, diff_magnitude, largest_blob, morphology, otsu_threshold, BinaryMask,
    Histogram256, MorphOp,
};
use crate::strobe_composer::{
    composite, default_spacing, select_frames_greedy, tune_spacing_for_count, StrobeSelection,
    Track,
};

use super::config::{InputSpec, PipelineConfig, SelectionMode, ThresholdMode};
use super::PipelineError;

type FrameStream = Box<dyn Iterator<Item = Result<Frame, FrameIoError>>>;

/// Open the configured input from the start. Called once per pass.
pub fn open_input(config: &PipelineConfig) -> Result<FrameStream, PipelineError> {
    let input = config
        .input
        .as_ref()
        .ok_or_else(|| PipelineError::Config("no input given".into()))?;
    match input {
        InputSpec::Y4m(path) => {
            let file = File::open(path)
                .map_err(|e| PipelineError::Input(FrameIoError::io(path.clone(), e)))?;
            let reader = Y4mReader::new(BufReader::new(file))?;
            match config.fps {
                None => Ok(Box::new(reader)),
                Some((num, den)) => Ok(Box::new(reader.map(move |f| {
                    f.map(|f| {
                        let index = f.frame_index;
                        f.with_index(index, timestamp(index, num, den))
                    })
                }))),
            }
        }
        InputSpec::Sequence(pattern) => {
            let fps = config.fps.unwrap_or((crate::frame_io::DEFAULT_FPS, 1));
            Ok(Box::new(read_image_sequence(pattern, fps)?))
        }
    }
}

fn progress(pass: &str, frames: u64, started: Instant) {
    let secs = started.elapsed().as_secs_f64();
    let rate = if secs > 0.0 {
        frames as f64 / secs
    } else {
        f64::INFINITY
    };
    eprintln!("{pass}: {frames} frames in {secs:.2} s ({rate:.1} frames/s)");
}

/// Output of pass 1.
#[derive(Debug, Clone)]
pub struct LearnedBackground {
    pub model: BackgroundModel,
    /// Background at model resolution.
    pub background: Frame,
    pub full_dims: (usize, usize),
    pub factor: usize,
    pub frame_count: u64,
}

impl LearnedBackground {
    /// Background enlarged to the input resolution.
    pub fn full_resolution(&self) -> Result<Frame, PipelineError> {
        let (w, h) = self.full_dims;
        Ok(upscale_nearest(&self.background, self.factor, w, h)?)
    }
}

/// Create the debug directory and echo the effective configuration into it.
fn prepare_debug_dir(config: &PipelineConfig) -> Result<(), PipelineError> {
    if let Some(dir) = &config.debug_dir {
        fs::create_dir_all(dir)
            .map_err(|e| PipelineError::Output(FrameIoError::io(dir.clone(), e)))?;
        write_text(&dir.join("config.txt"), &config.to_file_text())?;
    }
    Ok(())
}

pub fn learn_background(config: &PipelineConfig) -> Result<LearnedBackground, PipelineError> {
    config.validate()?;
    prepare_debug_dir(config)?;
    let started = Instant::now();
    let mut model: Option<BackgroundModel> = None;
    let mut full_dims = (0, 0);
    let mut factor = 1;
    let mut frame_count = 0u64;
    for frame in open_input(config)? {
        let frame = frame?;
        if model.is_none() {
            full_dims = frame.dims();
            factor = config.downscale.factor_for(frame.width, frame.height);
        }
        let small = downscale_box(&frame, factor)?;
        let m = match &mut model {
            Some(m) => m,
            None => model.insert(BackgroundModel::new(
                small.width,
                small.height,
                config.model_params(),
            )?),
        };
        m.process_frame(&small)?;
        frame_count += 1;
    }
    progress("pass 1 (background)", frame_count, started);
    let model = model.ok_or_else(|| {
        PipelineError::Input(FrameIoError::NoFramesFound(
            "input contains no frames".into(),
        ))
    })?;
    let background = model.background_image()?;
    let learned = LearnedBackground {
        model,
        background,
        full_dims,
        factor,
        frame_count,
    };
    if let Some(dir) = &config.debug_dir {
        write_image(
            &learned.full_resolution()?,
            &dir.join("background.png"),
            ImageFormat::Png,
        )
        .map_err(PipelineError::Output)?;
    }
    Ok(learned)
}

/// Segmentation of one frame at model resolution.
#[derive(Debug, Clone)]
pub struct FrameSegmentation {
    pub frame_index: u64,
    pub timestamp_s: f64,
    pub threshold: u16,
    /// Largest surviving blob at model resolution, if any.
    pub blob: Option<BinaryMask>,
    pub stats: Option<BlobStats>,
}

/// diff, threshold, open, close and keep the largest blob.
pub fn segment_frame(
    config: &PipelineConfig,
    frame: &Frame,
    background: &Frame,
) -> Result<(u16, Option<BinaryMask>), PipelineError> {
    let diff = diff_magnitude(frame, background)?;
    let t = match config.threshold {
        ThresholdMode::Otsu => otsu_threshold(&Histogram256::of(&diff))?,
        ThresholdMode::Fixed(t) => t,
    };
    let mut mask = apply_threshold(&diff, t);
    if config.morph_open > 0 {
        mask = morphology(&mask, MorphOp::Open, config.morph_open)?;
    }
    if config.morph_close > 0 {
        mask = morphology(&mask, MorphOp::Close, config.morph_close)?;
    }
    let pixels = (mask.width() * mask.height()) as f64;
    let min_area = ((config.min_area * pixels).ceil() as usize).max(1);
    Ok((t, largest_blob(&mask, min_area)))
}

#[derive(Debug, Clone)]
pub struct Segmentation {
    pub frames: Vec<FrameSegmentation>,
    pub track: Track,
}

pub fn segment_video(
    config: &PipelineConfig,
    learned: &LearnedBackground,
) -> Result<Segmentation, PipelineError> {
    let started = Instant::now();
    let (w, h) = learned.full_dims;
    let mut track = Track::new(w, h);
    let mut frames = Vec::new();
    let mut csv = Vec::new();
    for frame in open_input(config)? {
        let frame = frame?;
        if frame.dims() != learned.full_dims {
            return Err(PipelineError::Input(FrameIoError::DimensionMismatch {
                expected: learned.full_dims,
                got: frame.dims(),
            }));
        }
        let small = downscale_box(&frame, learned.factor)?;
        let (threshold, blob) = segment_frame(config, &small, &learned.background)?;
        let mut stats = None;
        if let Some(blob) = &blob {
            let full = blob.upscale_nearest(learned.factor, w, h)?;
            let s = blob_stats(&full, frame.frame_index, frame.timestamp_s)?;
            csv.push(s.csv_line());
            track.push(s, full)?;
            stats = Some(s);
        }
        if let Some(dir) = &config.debug_dir {
            let m = blob
                .clone()
                .unwrap_or_else(|| BinaryMask::new(small.width, small.height));
            write_gray_png(
                &dir.join(format!("mask_{:05}.png", frame.frame_index)),
                m.width(),
                m.height(),
                &m.to_gray_bytes(),
            )
            .map_err(PipelineError::Output)?;
        }
        frames.push(FrameSegmentation {
            frame_index: frame.frame_index,
            timestamp_s: frame.timestamp_s,
            threshold,
            blob,
            stats,
        });
    }
    progress("pass 2 (segmentation)", frames.len() as u64, started);
    if let Some(dir) = &config.debug_dir {
        let mut text = String::from(BlobStats::CSV_HEADER);
        text.push('\n');
        for line in csv {
            text.push_str(&line);
            text.push('\n');
        }
        write_text(&dir.join("blobs.csv"), &text)?;
    }
    Ok(Segmentation { frames, track })
}

pub fn select(config: &PipelineConfig, track: &Track) -> Result<StrobeSelection, PipelineError> {
    Ok(match config.selection {
        SelectionMode::Target { min, max } => tune_spacing_for_count(track, min, max)?,
        SelectionMode::Spacing(d) => select_frames_greedy(track, d)?,
        SelectionMode::AutoSpacing => {
            let d = default_spacing(track).ok_or(PipelineError::NoMotion)?;
            select_frames_greedy(track, d)?
        }
    })
}

#[derive(Debug, Clone)]
pub struct StrobeOutcome {
    pub learned: LearnedBackground,
    pub segmentation: Segmentation,
    pub selection: StrobeSelection,
    pub composite: Frame,
}

/// Full pipeline; writes the composite to `config.output`.
pub fn run_strobe(config: &PipelineConfig) -> Result<StrobeOutcome, PipelineError> {
    let learned = learn_background(config)?;
    let segmentation = segment_video(config, &learned)?;
    if segmentation.track.is_empty() {
        return Err(PipelineError::NoMotion);
    }
    let selection = select(config, &segmentation.track)?;
    if let Some(dir) = &config.debug_dir {
        let mut text = String::new();
        for &index in &selection.chosen {
            let (cx, cy) = segmentation
                .track
                .get(index)
                .expect("selected from track")
                .stats
                .centroid;
            text.push_str(&format!("{index} {cx:.4} {cy:.4}\n"));
        }
        write_text(&dir.join("selection.txt"), &text)?;
    }

    let started = Instant::now();
    let mut frames = Vec::with_capacity(selection.len());
    let mut wanted = selection.chosen.iter().peekable();
    for frame in open_input(config)? {
        let Some(&&next) = wanted.peek() else { break };
        let frame = frame?;
        if frame.frame_index == next {
            frames.push(frame);
            wanted.next();
        }
    }
    let masks: Vec<BinaryMask> = selection
        .chosen
        .iter()
        .map(|&i| {
            segmentation
                .track
                .get(i)
                .expect("selected from track")
                .mask
                .clone()
        })
        .collect();
    let composite = composite(&learned.full_resolution()?, &selection, &frames, &masks)?;
    progress("pass 3 (composite)", frames.len() as u64, started);
    write_image(
        &composite,
        &config.output,
        ImageFormat::from_path(&config.output),
    )
    .map_err(PipelineError::Output)?;
    Ok(StrobeOutcome {
        learned,
        segmentation,
        selection,
        composite,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), PipelineError> {
    let io = |e| PipelineError::Output(FrameIoError::io(path.to_path_buf(), e));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    out.write_all(text.as_bytes()).map_err(io)?;
    out.flush().map_err(io)
}

//! Command-line front end: `strobe`, `bgmodel`, `masks` and `synth`.

pub mod config;
pub mod pipeline;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::background_model::ModelError;
use crate::blob_analysis::BlobError;
use crate::frame_io::{write_image, FrameIoError, ImageFormat};
use crate::mask_pipeline::MaskError;
use crate::strobe_composer::{ComposeError, SelectionStatus};
use crate::synthkit::{self, SceneSpec, SynthError};

pub use config::{Downscale, InputSpec, PipelineConfig, SelectionMode, ThresholdMode};
pub use pipeline::{
    learn_background, open_input, run_strobe, segment_frame, segment_video, select,
    FrameSegmentation, LearnedBackground, Segmentation, StrobeOutcome,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(#[from] FrameIoError),
    #[error("output error: {0}")]
    Output(FrameIoError),
    #[error("no motion detected: no frame produced a subject blob")]
    NoMotion,
    #[error("processing error: {0}")]
    Processing(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Output(_) | PipelineError::Processing(_) => 1,
            PipelineError::Input(_) => 2,
            PipelineError::NoMotion => 3,
        }
    }
}

macro_rules! processing_error {
    ($($t:ty),*) => {$(
        impl From<$t> for PipelineError {
            fn from(e: $t) -> Self {
                PipelineError::Processing(e.to_string())
            }
        }
    )*};
}
processing_error!(ModelError, MaskError, BlobError, ComposeError);

impl From<SynthError> for PipelineError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Io(io) => PipelineError::Output(io),
            other => PipelineError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "strobe",
    version,
    about = "Stroboscopic composites from fixed-camera video"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full pipeline: learn background, segment, select strobes, composite.
    Strobe(PipelineArgs),
    /// Learn the background model and write the background image.
    Bgmodel(PipelineArgs),
    /// Learn the background and write per-frame subject masks into --output (a directory).
    Masks(PipelineArgs),
    /// Render a synthetic thrown-ball scene.
    Synth(SynthArgs),
}

/// Every flag mirrors a config-file key of the same name.
#[derive(Debug, Args)]
struct PipelineArgs {
    /// key=value configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Y4M file, or an image-sequence pattern such as frames/f_%04d.png
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    output: Option<String>,
    /// Frame rate as N or N:D
    #[arg(long)]
    fps: Option<String>,
    /// Integer factor or "auto"
    #[arg(long)]
    downscale: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Maximum mixture components per pixel
    #[arg(long)]
    components: Option<String>,
    /// Initial component standard deviation, intensity levels
    #[arg(long)]
    sigma0: Option<String>,
    #[arg(long = "match-thresh")]
    match_thresh: Option<String>,
    #[arg(long)]
    ct: Option<String>,
    #[arg(long)]
    cf: Option<String>,
    #[arg(long)]
    cthr: Option<String>,
    /// "otsu" or "fixed:N"
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long = "morph-open")]
    morph_open: Option<String>,
    #[arg(long = "morph-close")]
    morph_close: Option<String>,
    /// Smallest blob as a fraction of model pixels
    #[arg(long = "min-area")]
    min_area: Option<String>,
    /// Fixed strobe spacing in pixels, or "auto"
    #[arg(long, conflicts_with = "target")]
    dmin: Option<String>,
    /// Strobe count range as MIN,MAX
    #[arg(long)]
    target: Option<String>,
    #[arg(long = "debug-dir")]
    debug_dir: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl PipelineArgs {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        [
            ("input", &self.input),
            ("output", &self.output),
            ("fps", &self.fps),
            ("downscale", &self.downscale),
            ("alpha", &self.alpha),
            ("components", &self.components),
            ("sigma0", &self.sigma0),
            ("match-thresh", &self.match_thresh),
            ("ct", &self.ct),
            ("cf", &self.cf),
            ("cthr", &self.cthr),
            ("threshold", &self.threshold),
            ("morph-open", &self.morph_open),
            ("morph-close", &self.morph_close),
            ("min-area", &self.min_area),
            ("dmin", &self.dmin),
            ("target", &self.target),
            ("debug-dir", &self.debug_dir),
            ("seed", &self.seed),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }

    fn resolve(&self, default_output: &str) -> Result<PipelineConfig, PipelineError> {
        let mut config = PipelineConfig {
            output: PathBuf::from(default_output),
            ..PipelineConfig::default()
        };
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| {
                PipelineError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            config.apply_file_text(&text)?;
        }
        for (key, value) in self.pairs() {
            config.set(key, value)?;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// .y4m file, or a %d pattern ending in .ppm or .png
    #[arg(long)]
    output: String,
    #[arg(long, default_value_t = 320)]
    width: usize,
    #[arg(long, default_value_t = 240)]
    height: usize,
    #[arg(long, default_value_t = 125)]
    frames: u64,
    /// Noise standard deviation, intensity levels
    #[arg(long, default_value_t = 2.0)]
    noise: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Directory for ground-truth masks (gt_%05d.png) and the clean background
    #[arg(long = "gt-dir")]
    gt_dir: Option<PathBuf>,
}

fn run_command(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Strobe(args) => {
            let config = args.resolve("strobe.png")?;
            let outcome = run_strobe(&config)?;
            let note = match outcome.selection.status {
                SelectionStatus::Met => "",
                SelectionStatus::Short => " (fewer than requested)",
                SelectionStatus::Over => " (more than requested)",
            };
            eprintln!(
                "{} strobes{note}, spacing {:.1} px, written to {}",
                outcome.selection.len(),
                outcome.selection.d_min_used,
                config.output.display()
            );
        }
        Command::Bgmodel(args) => {
            let config = args.resolve("background.png")?;
            let learned = learn_background(&config)?;
            write_image(
                &learned.full_resolution()?,
                &config.output,
                ImageFormat::from_path(&config.output),
            )
            .map_err(PipelineError::Output)?;
        }
        Command::Masks(args) => {
            let mut config = args.resolve("masks")?;
            fs::create_dir_all(&config.output)
                .map_err(|e| PipelineError::Output(FrameIoError::io(config.output.clone(), e)))?;
            config.debug_dir = Some(config.output.clone());
            let learned = learn_background(&config)?;
            let segmentation = segment_video(&config, &learned)?;
            if segmentation.track.is_empty() {
                return Err(PipelineError::NoMotion);
            }
        }
        Command::Synth(args) => {
            let spec = SceneSpec {
                noise_sigma: args.noise,
                ..SceneSpec::thrown_ball(args.width, args.height, args.frames, args.seed)
            };
            spec.validate()?;
            if args.output.contains('%') {
                synthkit::write_sequence(&spec, &args.output)?;
            } else {
                synthkit::write_y4m(&spec, args.output.as_ref())?;
            }
            if let Some(dir) = &args.gt_dir {
                fs::create_dir_all(dir)
                    .map_err(|e| PipelineError::Output(FrameIoError::io(dir.clone(), e)))?;
                synthkit::write_ground_truth(&spec, dir)?;
            }
        }
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("strobe: {e}");
            e.exit_code()
        }
    }
}

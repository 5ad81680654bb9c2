//! Pipeline configuration: defaults, `key=value` files and flag overrides.
//!
//! Every command-line flag `--name` has a file key `name`. Files are applied
//! first, flags second, so flags win.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::background_model::ModelParams;

use super::PipelineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Otsu,
    Fixed(u16),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionMode {
    /// Fixed spacing in full-resolution pixels.
    Spacing(f64),
    /// 1.5 times the mean blob bounding-box diagonal.
    AutoSpacing,
    /// Bisect the spacing until the strobe count lands in `[min, max]`.
    Target { min: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Downscale {
    /// Smallest factor that brings the longer side to at most 320 pixels.
    Auto,
    Factor(usize),
}

/// Longer side targeted by [`Downscale::Auto`].
pub const AUTO_MODEL_SIDE: usize = 320;

impl Downscale {
    pub fn factor_for(self, width: usize, height: usize) -> usize {
        match self {
            Downscale::Factor(f) => f,
            Downscale::Auto => width.max(height).div_ceil(AUTO_MODEL_SIDE).max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputSpec {
    Y4m(PathBuf),
    /// printf-style pattern with one `%d` / `%0Nd`.
    Sequence(String),
}

impl InputSpec {
    pub fn from_arg(arg: &str) -> Self {
        if arg.contains('%') {
            InputSpec::Sequence(arg.to_string())
        } else {
            InputSpec::Y4m(PathBuf::from(arg))
        }
    }

    fn as_arg(&self) -> String {
        match self {
            InputSpec::Y4m(p) => p.display().to_string(),
            InputSpec::Sequence(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: Option<InputSpec>,
    pub output: PathBuf,
    /// Overrides the container rate (Y4M) or sets it (image sequences).
    pub fps: Option<(u32, u32)>,
    pub downscale: Downscale,
    pub model: ModelParams,
    /// When unset, `c_t` follows `0.05 * alpha`.
    pub ct_override: Option<f64>,
    pub threshold: ThresholdMode,
    /// Radius of the opening; 0 skips it.
    pub morph_open: usize,
    /// Radius of the closing; 0 skips it.
    pub morph_close: usize,
    /// Smallest blob kept, as a fraction of model-resolution pixels.
    pub min_area: f64,
    pub selection: SelectionMode,
    pub debug_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: None,
            output: PathBuf::from("strobe.png"),
            fps: None,
            downscale: Downscale::Auto,
            model: ModelParams::default(),
            ct_override: None,
            threshold: ThresholdMode::Otsu,
            morph_open: 1,
            morph_close: 2,
            min_area: 0.001,
            selection: SelectionMode::Target { min: 5, max: 10 },
            debug_dir: None,
            seed: 0,
        }
    }
}

/// Keys accepted by [`PipelineConfig::set`], in echo order.
pub const KEYS: &[&str] = &[
    "input",
    "output",
    "fps",
    "downscale",
    "alpha",
    "components",
    "sigma0",
    "match-thresh",
    "ct",
    "cf",
    "cthr",
    "threshold",
    "morph-open",
    "morph-close",
    "min-area",
    "dmin",
    "target",
    "debug-dir",
    "seed",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, PipelineError> {
    value
        .trim()
        .parse()
        .map_err(|_| PipelineError::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_fps(value: &str) -> Result<(u32, u32), PipelineError> {
    let (num, den) = match value.split_once([':', '/']) {
        Some((n, d)) => (parse_num("fps", n)?, parse_num("fps", d)?),
        None => (parse_num("fps", value)?, 1),
    };
    Ok((num, den))
}

impl PipelineConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let value = value.trim();
        match key {
            "input" => self.input = Some(InputSpec::from_arg(value)),
            "output" => self.output = PathBuf::from(value),
            "fps" => self.fps = Some(parse_fps(value)?),
            "downscale" => {
                self.downscale = if value == "auto" {
                    Downscale::Auto
                } else {
                    Downscale::Factor(parse_num(key, value)?)
                }
            }
            "alpha" => self.model.alpha = parse_num(key, value)?,
            "components" => self.model.m_max = parse_num(key, value)?,
            "sigma0" => {
                let sigma: f64 = parse_num(key, value)?;
                self.model.sigma0_sq = sigma * sigma;
            }
            "match-thresh" => self.model.match_thresh = parse_num(key, value)?,
            "ct" => self.ct_override = Some(parse_num(key, value)?),
            "cf" => self.model.c_f = parse_num(key, value)?,
            "cthr" => self.model.c_thr = parse_num(key, value)?,
            "threshold" => {
                self.threshold = match value {
                    "otsu" => ThresholdMode::Otsu,
                    _ => match value.strip_prefix("fixed:") {
                        Some(n) => ThresholdMode::Fixed(parse_num(key, n)?),
                        None => {
                            return Err(PipelineError::Config(format!(
                                "threshold: expected otsu or fixed:N, got {value:?}"
                            )))
                        }
                    },
                }
            }
            "morph-open" => self.morph_open = parse_num(key, value)?,
            "morph-close" => self.morph_close = parse_num(key, value)?,
            "min-area" => self.min_area = parse_num(key, value)?,
            "dmin" => {
                self.selection = if value == "auto" {
                    SelectionMode::AutoSpacing
                } else {
                    SelectionMode::Spacing(parse_num(key, value)?)
                }
            }
            "target" => {
                let (lo, hi) = value.split_once([',', ':']).ok_or_else(|| {
                    PipelineError::Config(format!("target: expected MIN,MAX, got {value:?}"))
                })?;
                self.selection = SelectionMode::Target {
                    min: parse_num(key, lo)?,
                    max: parse_num(key, hi)?,
                };
            }
            "debug-dir" => self.debug_dir = Some(PathBuf::from(value)),
            "seed" => self.seed = parse_num(key, value)?,
            other => return Err(PipelineError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Apply a `key=value` document. Blank lines and `#` comments are skipped.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), PipelineError> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                PipelineError::Config(format!("config line {}: expected key=value", n + 1))
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    /// Model parameters with `c_t` resolved.
    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            c_t: self.ct_override.unwrap_or(0.05 * self.model.alpha),
            ..self.model
        }
    }

    /// Check every downstream precondition before any frame is read.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |msg: String| Err(PipelineError::Config(msg));
        if self.input.is_none() {
            return bad("no input given".into());
        }
        if let Some((num, den)) = self.fps {
            if num == 0 || den == 0 {
                return bad("fps must be positive".into());
            }
        }
        if self.downscale == Downscale::Factor(0) {
            return bad("downscale factor must be at least 1".into());
        }
        self.model_params()
            .validate()
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.min_area) {
            return bad(format!(
                "min-area must be a fraction in [0, 1], got {}",
                self.min_area
            ));
        }
        match self.selection {
            SelectionMode::Spacing(d) if !(d > 0.0 && d.is_finite()) => {
                bad(format!("dmin must be positive, got {d}"))
            }
            SelectionMode::Target { min, max } if min == 0 || min > max => bad(format!(
                "target [{min}, {max}] must satisfy 1 <= min <= max"
            )),
            _ => Ok(()),
        }
    }

    /// Effective configuration in the file format, one key per line.
    pub fn to_file_text(&self) -> String {
        let p = self.model_params();
        let mut out = String::new();
        for key in KEYS {
            let value = match *key {
                "input" => match &self.input {
                    Some(i) => i.as_arg(),
                    None => continue,
                },
                "output" => self.output.display().to_string(),
                "fps" => match self.fps {
                    Some((n, d)) => format!("{n}:{d}"),
                    None => continue,
                },
                "downscale" => match self.downscale {
                    Downscale::Auto => "auto".into(),
                    Downscale::Factor(f) => f.to_string(),
                },
                "alpha" => p.alpha.to_string(),
                "components" => p.m_max.to_string(),
                "sigma0" => p.sigma0_sq.sqrt().to_string(),
                "match-thresh" => p.match_thresh.to_string(),
                "ct" => p.c_t.to_string(),
                "cf" => p.c_f.to_string(),
                "cthr" => p.c_thr.to_string(),
                "threshold" => match self.threshold {
                    ThresholdMode::Otsu => "otsu".into(),
                    ThresholdMode::Fixed(t) => format!("fixed:{t}"),
                },
                "morph-open" => self.morph_open.to_string(),
                "morph-close" => self.morph_close.to_string(),
                "min-area" => self.min_area.to_string(),
                "dmin" => match self.selection {
                    SelectionMode::Spacing(d) => d.to_string(),
                    SelectionMode::AutoSpacing => "auto".into(),
                    SelectionMode::Target { .. } => continue,
                },
                "target" => match self.selection {
                    SelectionMode::Target { min, max } => format!("{min},{max}"),
                    _ => continue,
                },
                "debug-dir" => match &self.debug_dir {
                    Some(d) => d.display().to_string(),
                    None => continue,
                },
                "seed" => self.seed.to_string(),
                _ => unreachable!("every key is listed"),
            };
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }
}

//! Deterministic synthetic scenes with exact ground truth: a disk moving over
//! a static background, with optional per-pixel Gaussian noise.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use thiserror::Error;

use crate::frame_io::{
    round_to_u8, write_gray_png, write_image, Frame, FrameIoError, ImageFormat, SequencePattern,
    VideoHeader, Y4mWriter,
};
use crate::mask_pipeline::BinaryMask;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("frame {index} out of range for a {n_frames}-frame scene")]
    IndexOutOfRange { index: u64, n_frames: u64 },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error(transparent)]
    Io(#[from] FrameIoError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BackgroundPattern {
    Flat([u8; 3]),
    /// Linear blend from `from` at the top-left corner to `to` at the bottom-right.
    Gradient {
        from: [u8; 3],
        to: [u8; 3],
    },
    Checker {
        a: [u8; 3],
        b: [u8; 3],
        cell: usize,
    },
}

impl BackgroundPattern {
    fn color(&self, x: usize, y: usize, width: usize, height: usize) -> [u8; 3] {
        match *self {
            BackgroundPattern::Flat(c) => c,
            BackgroundPattern::Gradient { from, to } => {
                let span = (width + height).saturating_sub(2).max(1) as f64;
                let t = (x + y) as f64 / span;
                std::array::from_fn(|i| {
                    round_to_u8(from[i] as f64 + t * (to[i] as f64 - from[i] as f64))
                })
            }
            BackgroundPattern::Checker { a, b, cell } => {
                let cell = cell.max(1);
                if (x / cell + y / cell).is_multiple_of(2) {
                    a
                } else {
                    b
                }
            }
        }
    }
}

/// Disk center as a function of the frame index, in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trajectory {
    Linear {
        start: (f64, f64),
        velocity: (f64, f64),
    },
    Parabolic {
        start: (f64, f64),
        velocity: (f64, f64),
        accel: (f64, f64),
    },
}

impl Trajectory {
    pub fn position(&self, k: u64) -> (f64, f64) {
        let t = k as f64;
        match *self {
            Trajectory::Linear { start, velocity } => {
                (start.0 + velocity.0 * t, start.1 + velocity.1 * t)
            }
            Trajectory::Parabolic {
                start,
                velocity,
                accel,
            } => (
                start.0 + velocity.0 * t + 0.5 * accel.0 * t * t,
                start.1 + velocity.1 * t + 0.5 * accel.1 * t * t,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    pub n_frames: u64,
    pub background: BackgroundPattern,
    pub disk_radius: f64,
    pub disk_color: [u8; 3],
    pub trajectory: Trajectory,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SceneSpec {
    /// A white ball thrown in an arc from left to right across a gradient,
    /// with light sensor noise. The radius is 1/20 of the shorter side.
    pub fn thrown_ball(width: usize, height: usize, n_frames: u64, seed: u64) -> Self {
        let (w, h) = (width as f64, height as f64);
        let radius = (w.min(h) / 20.0).max(2.0);
        let margin = radius + w.min(h) / 20.0;
        let last = (n_frames.max(2) - 1) as f64;
        let (x0, x1) = (margin, w - margin);
        let y0 = h - margin;
        let apex = 0.35 * h;
        let accel = 8.0 * (y0 - apex) / (last * last);
        SceneSpec {
            width,
            height,
            n_frames,
            background: BackgroundPattern::Gradient {
                from: [40, 60, 90],
                to: [110, 130, 70],
            },
            disk_radius: radius,
            disk_color: [255, 255, 255],
            trajectory: Trajectory::Parabolic {
                start: (x0, y0),
                velocity: ((x1 - x0) / last, -0.5 * accel * last),
                accel: (0.0, accel),
            },
            noise_sigma: 2.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: String| Err(SynthError::InvalidScene(msg));
        if self.width == 0 || self.height == 0 || self.n_frames == 0 {
            return bad("width, height and frame count must be positive".into());
        }
        if self.disk_radius.is_nan() || self.disk_radius < 2.0 {
            return bad(format!("disk radius {} is below 2", self.disk_radius));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise sigma {} is invalid", self.noise_sigma));
        }
        let r = self.disk_radius;
        let (w, h) = ((self.width - 1) as f64, (self.height - 1) as f64);
        for k in 0..self.n_frames {
            let (cx, cy) = self.trajectory.position(k);
            if cx - r < 0.0 || cy - r < 0.0 || cx + r > w || cy + r > h {
                return bad(format!(
                    "disk leaves the frame at frame {k} ({cx:.2}, {cy:.2})"
                ));
            }
        }
        Ok(())
    }

    fn check_index(&self, k: u64) -> Result<(), SynthError> {
        if k >= self.n_frames {
            return Err(SynthError::IndexOutOfRange {
                index: k,
                n_frames: self.n_frames,
            });
        }
        Ok(())
    }

    pub fn fps(&self) -> (u32, u32) {
        (crate::frame_io::DEFAULT_FPS, 1)
    }

    fn in_disk(&self, x: usize, y: usize, center: (f64, f64)) -> bool {
        let (dx, dy) = (x as f64 - center.0, y as f64 - center.1);
        dx * dx + dy * dy <= self.disk_radius * self.disk_radius
    }

    /// The background without subject or noise.
    pub fn true_background(&self) -> Frame {
        let mut f = Frame::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                f.set_pixel(x, y, self.background.color(x, y, self.width, self.height));
            }
        }
        f
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard normal deviate keyed by (seed, frame, x, y, channel).
fn keyed_normal(seed: u64, k: u64, x: usize, y: usize, channel: usize) -> f64 {
    let mut h = splitmix64(seed);
    for word in [k, x as u64, y as u64, channel as u64] {
        h = splitmix64(h ^ word);
    }
    let h2 = splitmix64(h);
    // 53-bit uniforms; u1 in (0, 1] keeps the log finite
    let u1 = ((h >> 11) + 1) as f64 / (1u64 << 53) as f64;
    let u2 = (h2 >> 11) as f64 / (1u64 << 53) as f64;
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn render_frame(spec: &SceneSpec, k: u64) -> Result<Frame, SynthError> {
    spec.check_index(k)?;
    let center = spec.trajectory.position(k);
    let mut frame = Frame::new(spec.width, spec.height);
    for y in 0..spec.height {
        for x in 0..spec.width {
            let clean = if spec.in_disk(x, y, center) {
                spec.disk_color
            } else {
                spec.background.color(x, y, spec.width, spec.height)
            };
            let px = if spec.noise_sigma > 0.0 {
                std::array::from_fn(|c| {
                    let n = keyed_normal(spec.seed, k, x, y, c);
                    round_to_u8(clean[c] as f64 + spec.noise_sigma * n)
                })
            } else {
                clean
            };
            frame.set_pixel(x, y, px);
        }
    }
    let (num, den) = spec.fps();
    Ok(frame.with_index(k, crate::frame_io::timestamp(k, num, den)))
}

pub fn ground_truth_mask(spec: &SceneSpec, k: u64) -> Result<BinaryMask, SynthError> {
    spec.check_index(k)?;
    let center = spec.trajectory.position(k);
    Ok(BinaryMask::from_fn(spec.width, spec.height, |x, y| {
        spec.in_disk(x, y, center)
    }))
}

pub fn write_y4m(spec: &SceneSpec, path: &Path) -> Result<(), SynthError> {
    spec.validate()?;
    let file = File::create(path).map_err(|e| FrameIoError::io(path.to_path_buf(), e))?;
    let (num, den) = spec.fps();
    let mut writer = Y4mWriter::new(
        BufWriter::new(file),
        VideoHeader::new(spec.width, spec.height, num, den),
    )?;
    for k in 0..spec.n_frames {
        writer.write_frame(&render_frame(spec, k)?)?;
    }
    writer.finish()?;
    Ok(())
}

/// Write frames to a `%d`-style pattern; the extension picks PPM or PNG.
pub fn write_sequence(spec: &SceneSpec, pattern: &str) -> Result<(), SynthError> {
    spec.validate()?;
    let pattern = SequencePattern::parse(pattern)?;
    for k in 0..spec.n_frames {
        let path = pattern.path_for(k);
        write_image(
            &render_frame(spec, k)?,
            &path,
            ImageFormat::from_path(&path),
        )?;
    }
    Ok(())
}

/// Ground-truth masks as `gt_%05d.png` (0 / 255) plus the clean background.
pub fn write_ground_truth(spec: &SceneSpec, dir: &Path) -> Result<(), SynthError> {
    spec.validate()?;
    for k in 0..spec.n_frames {
        let mask = ground_truth_mask(spec, k)?;
        write_gray_png(
            &dir.join(format!("gt_{k:05}.png")),
            spec.width,
            spec.height,
            &mask.to_gray_bytes(),
        )?;
    }
    write_image(
        &spec.true_background(),
        &dir.join("background.png"),
        ImageFormat::Png,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blob_analysis::compute_moments;

    fn quiet(spec: SceneSpec) -> SceneSpec {
        SceneSpec {
            noise_sigma: 0.0,
            ..spec
        }
    }

    #[test]
    fn demo_scene_is_valid() {
        SceneSpec::thrown_ball(320, 240, 125, 1).validate().unwrap();
        SceneSpec::thrown_ball(64, 48, 10, 1).validate().unwrap();
    }

    #[test]
    fn noiseless_frame_is_background_plus_disk() {
        let spec = quiet(SceneSpec::thrown_ball(96, 64, 20, 3));
        let f = render_frame(&spec, 7).unwrap();
        let gt = ground_truth_mask(&spec, 7).unwrap();
        let bg = spec.true_background();
        for y in 0..spec.height {
            for x in 0..spec.width {
                let want = if gt.get(x, y) {
                    spec.disk_color
                } else {
                    bg.pixel(x, y)
                };
                assert_eq!(f.pixel(x, y), want);
            }
        }
    }

    #[test]
    fn frames_render_identically_in_isolation() {
        let spec = SceneSpec::thrown_ball(64, 48, 10, 9);
        assert_eq!(
            render_frame(&spec, 4).unwrap(),
            render_frame(&spec, 4).unwrap()
        );
        assert_ne!(
            render_frame(&spec, 4).unwrap(),
            render_frame(&spec, 5).unwrap()
        );
        let other = SceneSpec {
            seed: 10,
            ..spec.clone()
        };
        assert_ne!(
            render_frame(&spec, 4).unwrap().pixels,
            render_frame(&other, 4).unwrap().pixels
        );
    }

    #[test]
    fn disk_area_close_to_pi_r_squared() {
        let spec = SceneSpec {
            disk_radius: 10.0,
            trajectory: Trajectory::Linear {
                start: (30.3, 25.7),
                velocity: (0.0, 0.0),
            },
            ..SceneSpec::thrown_ball(64, 64, 1, 0)
        };
        let area = ground_truth_mask(&spec, 0).unwrap().count_ones() as f64;
        let ideal = std::f64::consts::PI * 100.0;
        assert!((area - ideal).abs() / ideal < 0.05, "{area}");
    }

    #[test]
    fn centroid_tracks_trajectory() {
        let spec = SceneSpec::thrown_ball(160, 120, 30, 0);
        for k in 0..spec.n_frames {
            let m = compute_moments(&ground_truth_mask(&spec, k).unwrap()).unwrap();
            let (cx, cy) = m.centroid();
            let (tx, ty) = spec.trajectory.position(k);
            assert!((cx - tx).abs() <= 0.5 && (cy - ty).abs() <= 0.5, "k={k}");
        }
    }

    #[test]
    fn out_of_range() {
        let spec = SceneSpec::thrown_ball(64, 48, 10, 1);
        assert!(matches!(
            render_frame(&spec, 10),
            Err(SynthError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            ground_truth_mask(&spec, 11),
            Err(SynthError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_disk_leaving_frame() {
        let spec = SceneSpec {
            trajectory: Trajectory::Linear {
                start: (20.0, 20.0),
                velocity: (10.0, 0.0),
            },
            ..SceneSpec::thrown_ball(64, 48, 10, 1)
        };
        assert!(matches!(spec.validate(), Err(SynthError::InvalidScene(_))));
        let tiny = SceneSpec {
            disk_radius: 1.5,
            ..SceneSpec::thrown_ball(64, 48, 10, 1)
        };
        assert!(tiny.validate().is_err());
    }

    #[test]
    fn noise_has_requested_spread() {
        let spec = SceneSpec {
            background: BackgroundPattern::Flat([128; 3]),
            noise_sigma: 2.0,
            ..SceneSpec::thrown_ball(160, 120, 2, 5)
        };
        let f = render_frame(&spec, 0).unwrap();
        let gt = ground_truth_mask(&spec, 0).unwrap();
        let devs: Vec<f64> = f
            .pixels
            .chunks(3)
            .zip(gt.bits())
            .filter(|(_, &d)| !d)
            .flat_map(|(p, _)| p.iter().map(|&v| v as f64 - 128.0).collect::<Vec<_>>())
            .collect();
        let n = devs.len() as f64;
        let mean = devs.iter().sum::<f64>() / n;
        let var = devs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 0.05, "{mean}");
        // rounding adds 1/12 to the variance
        assert!((var - 4.0 - 1.0 / 12.0).abs() < 0.15, "{var}");
    }
}

//! Reference implementations and fixtures shared by the integration tests
//! and the acceptance binary. Each oracle is written directly from the
//! defining formula, without the production code's shortcuts.
#![allow(dead_code)]

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use strobe_core::background_model::{GmmComponent, ModelParams};
use strobe_core::blob_analysis::BlobStats;
use strobe_core::mask_pipeline::{BinaryMask, BoundingBox};
use strobe_core::strobe_composer::Track;

// ---------------------------------------------------------------- GMM

/// One pixel's mixture as parallel arrays.
#[derive(Debug, Clone, Default)]
pub struct OracleMixture {
    pub w: Vec<f64>,
    pub mu: Vec<[f64; 3]>,
    pub var: Vec<f64>,
}

fn gauss3(mu: &[f64; 3], var: f64, x: &[f64; 3]) -> f64 {
    let d2 = (x[0] - mu[0]).powi(2) + (x[1] - mu[1]).powi(2) + (x[2] - mu[2]).powi(2);
    (2.0 * std::f64::consts::PI * var).powf(-1.5) * (-d2 / (2.0 * var)).exp()
}

impl OracleMixture {
    pub fn len(&self) -> usize {
        self.w.len()
    }

    /// True when `x` is foreground.
    pub fn classify(&self, x: &[f64; 3], p: &ModelParams) -> bool {
        let n = self.len();
        let mut b = n;
        let mut acc = 0.0;
        for i in 0..n {
            acc += self.w[i];
            if acc >= 1.0 - p.c_f {
                b = i + 1;
                break;
            }
        }
        let mut dens = 0.0;
        for i in 0..b {
            dens += self.w[i] * gauss3(&self.mu[i], self.var[i], x);
        }
        dens.partial_cmp(&p.c_thr) != Some(std::cmp::Ordering::Greater)
    }

    pub fn step(&mut self, x: &[f64; 3], p: &ModelParams) -> bool {
        let fg = self.classify(x, p);
        let n = self.len();

        let mut owner: Option<usize> = None;
        for i in 0..n {
            let d2 = (x[0] - self.mu[i][0]).powi(2)
                + (x[1] - self.mu[i][1]).powi(2)
                + (x[2] - self.mu[i][2]).powi(2);
            if d2 < p.match_thresh * self.var[i] {
                let heavier = match owner {
                    None => true,
                    Some(o) => self.w[i] > self.w[o],
                };
                if heavier {
                    owner = Some(i);
                }
            }
        }

        for i in 0..n {
            let o = if owner == Some(i) { 1.0 } else { 0.0 };
            self.w[i] = self.w[i] + p.alpha * (o - self.w[i]) - p.alpha * p.c_t;
        }
        if let Some(k) = owner {
            let r = p.alpha / self.w[k];
            let old = self.mu[k];
            let d = [x[0] - old[0], x[1] - old[1], x[2] - old[2]];
            let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            for c in 0..3 {
                self.mu[k][c] = old[c] + r * d[c];
            }
            let v = self.var[k] + r * (d2 / 3.0 - self.var[k]);
            self.var[k] = v.max(4.0).min(5.0 * p.sigma0_sq);
        }

        let mut kept = OracleMixture::default();
        for i in 0..n {
            if self.w[i] > 0.0 {
                kept.w.push(self.w[i]);
                kept.mu.push(self.mu[i]);
                kept.var.push(self.var[i]);
            }
        }
        *self = kept;

        if owner.is_none() {
            if self.len() < p.m_max {
                self.w.push(p.alpha);
                self.mu.push(*x);
                self.var.push(p.sigma0_sq);
            } else {
                let mut lightest = 0;
                for i in 0..self.len() {
                    if self.w[i] <= self.w[lightest] {
                        lightest = i;
                    }
                }
                self.w[lightest] = p.alpha;
                self.mu[lightest] = *x;
                self.var[lightest] = p.sigma0_sq;
            }
        }

        let total: f64 = self.w.iter().sum();
        for w in &mut self.w {
            *w /= total;
        }
        // stable insertion sort, heaviest first
        for i in 1..self.len() {
            let mut j = i;
            while j > 0 && self.w[j - 1] < self.w[j] {
                self.w.swap(j - 1, j);
                self.mu.swap(j - 1, j);
                self.var.swap(j - 1, j);
                j -= 1;
            }
        }
        fg
    }

    /// Largest absolute difference over every field, or infinity when the
    /// component counts differ.
    pub fn max_field_diff(&self, other: &[GmmComponent]) -> f64 {
        if other.len() != self.len() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (i, c) in other.iter().enumerate() {
            worst = worst.max((c.weight - self.w[i]).abs());
            worst = worst.max((c.variance - self.var[i]).abs());
            for ch in 0..3 {
                worst = worst.max((c.mean[ch] - self.mu[i][ch]).abs());
            }
        }
        worst
    }
}

/// Parameter sets exercising creation, replacement and pruning.
pub fn gmm_param_sets() -> Vec<ModelParams> {
    let base = ModelParams::default();
    vec![
        base,
        ModelParams {
            alpha: 0.05,
            m_max: 3,
            c_t: 0.05 * 0.05,
            ..base
        },
        ModelParams {
            alpha: 0.2,
            m_max: 2,
            sigma0_sq: 100.0,
            match_thresh: 4.0,
            c_t: 0.5,
            c_f: 0.3,
            ..base
        },
        ModelParams {
            alpha: 0.01,
            m_max: 5,
            sigma0_sq: 36.0,
            c_t: 0.2,
            c_thr: 1e-7,
            ..base
        },
    ]
}

/// Samples drawn mostly from a few clusters with occasional outliers, so the
/// recursion visits matches, new components and replacements.
pub fn scripted_sample(rng: &mut impl Rng) -> [f64; 3] {
    const CENTRES: [[f64; 3]; 3] = [
        [40.0, 60.0, 90.0],
        [200.0, 190.0, 180.0],
        [120.0, 30.0, 220.0],
    ];
    let roll: f64 = rng.gen();
    if roll < 0.1 {
        return [
            rng.gen_range(0..256) as f64,
            rng.gen_range(0..256) as f64,
            rng.gen_range(0..256) as f64,
        ];
    }
    let c = if roll < 0.7 {
        0
    } else if roll < 0.9 {
        1
    } else {
        2
    };
    std::array::from_fn(|ch| {
        (CENTRES[c][ch] + rng.gen_range(-6.0..6.0))
            .round()
            .clamp(0.0, 255.0)
    })
}

// ---------------------------------------------------------------- Otsu

/// Exhaustive argmax of w0 * w1 * (mu0 - mu1)^2 over t, in exact rationals.
pub fn otsu_oracle(counts: &[u64; 256]) -> u16 {
    let total: u64 = counts.iter().sum();
    let n = BigRational::from_integer(BigInt::from(total));
    let mut best: Option<(u16, BigRational)> = None;
    for t in 1..256usize {
        let n0: u64 = counts[..t].iter().sum();
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let s0: u128 = (0..t).map(|v| v as u128 * counts[v] as u128).sum();
        let s1: u128 = (t..256).map(|v| v as u128 * counts[v] as u128).sum();
        let int = |v: u128| BigRational::from_integer(BigInt::from(v));
        let w0 = int(n0 as u128) / &n;
        let w1 = int(n1 as u128) / &n;
        let mu0 = int(s0) / int(n0 as u128);
        let mu1 = int(s1) / int(n1 as u128);
        let gap = mu0 - mu1;
        let score = w0 * w1 * &gap * &gap;
        let better = match &best {
            None => true,
            Some((_, b)) => score > *b,
        };
        if better {
            best = Some((t as u16, score));
        }
    }
    match best {
        Some((t, _)) => t,
        None => {
            counts
                .iter()
                .position(|&c| c > 0)
                .expect("non-empty histogram") as u16
                + 1
        }
    }
}

/// Histograms of varied shape: sparse spikes, dense noise, bimodal, single bin.
pub fn random_histogram(rng: &mut impl Rng) -> [u64; 256] {
    let mut counts = [0u64; 256];
    match rng.gen_range(0..5) {
        0 => {
            for _ in 0..rng.gen_range(1..5) {
                counts[rng.gen_range(0..256)] += rng.gen_range(1..1000);
            }
        }
        1 => {
            for c in counts.iter_mut() {
                *c = rng.gen_range(0..50);
            }
            counts[rng.gen_range(0..256)] += 1;
        }
        2 => {
            let (a, b) = (rng.gen_range(0..128), rng.gen_range(128..256));
            for _ in 0..rng.gen_range(100..3000) {
                let centre = if rng.gen_bool(0.7) { a } else { b };
                let v = (centre as i64 + rng.gen_range(-10..=10)).clamp(0, 255);
                counts[v as usize] += 1;
            }
        }
        3 => {
            counts[rng.gen_range(0..256)] = rng.gen_range(1..u32::MAX as u64);
        }
        _ => {
            // symmetric shapes produce exact ties
            let centre = rng.gen_range(20..236);
            let spread = rng.gen_range(1..20);
            let height = rng.gen_range(1..100);
            counts[centre - spread] = height;
            counts[centre + spread] = height;
            if rng.gen_bool(0.5) {
                counts[centre] = rng.gen_range(1..100);
            }
        }
    }
    counts
}

// ---------------------------------------------------------------- masks

pub fn random_mask(rng: &mut impl Rng, max_side: usize) -> BinaryMask {
    let w = rng.gen_range(1..=max_side);
    let h = rng.gen_range(1..=max_side);
    let density: f64 = rng.gen_range(0.05..0.95);
    BinaryMask::from_fn(w, h, |_, _| rng.gen_bool(density))
}

/// Raw moments as integers and central moments evaluated exactly, then
/// rounded once to f64.
pub struct NaiveMoments {
    pub m00: u64,
    pub m10: u64,
    pub m01: u64,
    pub mu20: f64,
    pub mu02: f64,
    pub mu11: f64,
}

pub fn naive_moments(mask: &BinaryMask) -> NaiveMoments {
    let (mut m00, mut m10, mut m01) = (0u64, 0u64, 0u64);
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                m00 += 1;
                m10 += x as u64;
                m01 += y as u64;
            }
        }
    }
    if m00 == 0 {
        return NaiveMoments {
            m00,
            m10,
            m01,
            mu20: 0.0,
            mu02: 0.0,
            mu11: 0.0,
        };
    }
    // sum over pixels of (x - m10/m00)^p (y - m01/m00)^q, scaled by m00^2
    let n = BigInt::from(m00);
    let (mut s20, mut s02, mut s11) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) {
                let dx = BigInt::from(x as u64) * &n - BigInt::from(m10);
                let dy = BigInt::from(y as u64) * &n - BigInt::from(m01);
                s20 += &dx * &dx;
                s02 += &dy * &dy;
                s11 += &dx * &dy;
            }
        }
    }
    let scale = &n * &n;
    let f = |s: BigInt| BigRational::new(s, scale.clone()).to_f64().unwrap();
    NaiveMoments {
        m00,
        m10,
        m01,
        mu20: f(s20),
        mu02: f(s02),
        mu11: f(s11),
    }
}

/// Square-window erosion by direct lookup; `outside` is the value assumed
/// beyond the border.
pub fn erode_direct(mask: &BinaryMask, r: usize, outside: bool) -> BinaryMask {
    let r = r as isize;
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        for dy in -r..=r {
            for dx in -r..=r {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                let v = if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    outside
                } else {
                    mask.get(nx as usize, ny as usize)
                };
                if !v {
                    return false;
                }
            }
        }
        true
    })
}

/// Square-window dilation by direct lookup; beyond the border is unset.
pub fn dilate_direct(mask: &BinaryMask, r: usize) -> BinaryMask {
    let r = r as isize;
    let (w, h) = (mask.width() as isize, mask.height() as isize);
    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        for dy in -r..=r {
            for dx in -r..=r {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx >= 0 && ny >= 0 && nx < w && ny < h && mask.get(nx as usize, ny as usize) {
                    return true;
                }
            }
        }
        false
    })
}

/// 8-connected flood fill. Returns per-pixel component ids (0 = unset),
/// numbered in order of first row-major pixel, and the area of each id.
pub fn flood_fill_labels(mask: &BinaryMask) -> (Vec<usize>, Vec<usize>) {
    let (w, h) = mask.dims();
    let mut ids = vec![0usize; w * h];
    let mut areas = vec![0usize];
    for start in 0..w * h {
        if !mask.bits()[start] || ids[start] != 0 {
            continue;
        }
        let id = areas.len();
        areas.push(0);
        ids[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            areas[id] += 1;
            let (x, y) = ((p % w) as isize, (p / w) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let q = ny as usize * w + nx as usize;
                    if mask.bits()[q] && ids[q] == 0 {
                        ids[q] = id;
                        queue.push_back(q);
                    }
                }
            }
        }
    }
    (ids, areas)
}

// ---------------------------------------------------------------- tracks

/// A track whose entries sit at the given centroids. Masks are a single
/// pixel; only the centroid matters for selection.
pub fn track_at(centroids: &[(f64, f64)]) -> Track {
    let (w, h) = (400, 300);
    let mut track = Track::new(w, h);
    for (i, &c) in centroids.iter().enumerate() {
        let mut mask = BinaryMask::new(w, h);
        mask.set(0, 0, true);
        let stats = BlobStats {
            frame_index: i as u64,
            timestamp_s: i as f64 / 25.0,
            area: 1,
            centroid: c,
            mu20: 0.0,
            mu02: 0.0,
            mu11: 0.0,
            bbox: BoundingBox {
                min_x: 0,
                min_y: 0,
                max_x: 9,
                max_y: 9,
            },
        };
        track.push(stats, mask).expect("valid track entry");
    }
    track
}

pub fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

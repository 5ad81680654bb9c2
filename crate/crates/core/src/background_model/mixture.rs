//! A single pixel's mixture of isotropic RGB Gaussians and its online update.

use std::f64::consts::PI;

use super::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmmComponent {
    pub weight: f64,
    pub mean: [f64; 3],
    /// Shared across the three channels.
    pub variance: f64,
}

impl GmmComponent {
    fn sq_dist(&self, x: &[f64; 3]) -> f64 {
        sq_dist(&self.mean, x)
    }

    /// Isotropic 3-D normal density at `x`.
    pub fn density(&self, x: &[f64; 3]) -> f64 {
        let norm = (2.0 * PI * self.variance).powf(-1.5);
        norm * (-0.5 * self.sq_dist(x) / self.variance).exp()
    }
}

#[inline]
fn sq_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d0 = a[0] - b[0];
    let d1 = a[1] - b[1];
    let d2 = a[2] - b[2];
    d0 * d0 + d1 * d1 + d2 * d2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelClass {
    Background,
    Foreground,
}

/// Components kept sorted by weight, heaviest first, with weights summing to one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PixelMixture {
    components: Vec<GmmComponent>,
}

impl PixelMixture {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from explicit components; weights are renormalized and sorted.
    pub fn from_components(mut components: Vec<GmmComponent>) -> Self {
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if total > 0.0 {
            for c in &mut components {
                c.weight /= total;
            }
        }
        components.sort_by(|a, b| b.weight.total_cmp(&a.weight));
        PixelMixture { components }
    }

    pub fn components(&self) -> &[GmmComponent] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dominant(&self) -> Option<&GmmComponent> {
        self.components.first()
    }

    /// Full-mixture density at `x`.
    pub fn density(&self, x: &[f64; 3]) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.density(x))
            .sum()
    }

    /// Number of leading components that model the background: the fewest
    /// whose cumulative weight reaches `1 - c_f`.
    pub fn background_count(&self, c_f: f64) -> usize {
        let target = 1.0 - c_f;
        let mut cumulative = 0.0;
        for (i, c) in self.components.iter().enumerate() {
            cumulative += c.weight;
            if cumulative >= target {
                return i + 1;
            }
        }
        self.components.len()
    }

    pub fn background_density(&self, x: &[f64; 3], c_f: f64) -> f64 {
        self.components[..self.background_count(c_f)]
            .iter()
            .map(|c| c.weight * c.density(x))
            .sum()
    }

    pub fn classify(&self, x: &[f64; 3], params: &ModelParams) -> PixelClass {
        if self.background_density(x, params.c_f) > params.c_thr {
            PixelClass::Background
        } else {
            PixelClass::Foreground
        }
    }

    /// Fold one sample into the mixture with learning rate `params.alpha`.
    /// Returns the classification of `x` against the mixture as it was before
    /// the update.
    pub fn update(&mut self, x: &[f64; 3], params: &ModelParams) -> PixelClass {
        let class = self.classify(x, params);
        let alpha = params.alpha;
        let decay = alpha * params.c_t;

        // Sorted heaviest first, so the first match is the heaviest one and
        // ties go to the lowest index.
        let owner = self
            .components
            .iter()
            .position(|c| c.sq_dist(x) < params.match_thresh * c.variance);

        for (i, c) in self.components.iter_mut().enumerate() {
            let o = if Some(i) == owner { 1.0 } else { 0.0 };
            c.weight += alpha * (o - c.weight) - decay;
        }
        if let Some(i) = owner {
            let c = &mut self.components[i];
            let rate = alpha / c.weight;
            let delta = [x[0] - c.mean[0], x[1] - c.mean[1], x[2] - c.mean[2]];
            let d2 = delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2];
            for (m, d) in c.mean.iter_mut().zip(delta) {
                *m += rate * d;
            }
            c.variance += rate * (d2 / 3.0 - c.variance);
            c.variance = c.variance.clamp(params.var_min(), params.var_max());
        }
        self.components.retain(|c| c.weight > 0.0);

        if owner.is_none() {
            let fresh = GmmComponent {
                weight: alpha,
                mean: *x,
                variance: params.sigma0_sq,
            };
            if self.components.len() < params.m_max {
                self.components.push(fresh);
            } else if let Some(last) = self.components.last_mut() {
                *last = fresh;
            }
        }

        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        for c in &mut self.components {
            c.weight /= total;
        }
        self.components
            .sort_by(|a, b| b.weight.total_cmp(&a.weight));
        class
    }
}

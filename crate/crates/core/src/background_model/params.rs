use super::ModelError;

/// Lower clamp on component variance, intensity².
pub const VARIANCE_MIN: f64 = 4.0;
/// Upper clamp on component variance as a multiple of the initial variance.
pub const VARIANCE_MAX_FACTOR: f64 = 5.0;

/// Tuning of the per-pixel mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Learning rate, 1/T for a history of T frames.
    pub alpha: f64,
    /// Maximum number of components per pixel.
    pub m_max: usize,
    /// Variance given to a freshly created component, intensity².
    pub sigma0_sq: f64,
    /// Squared Mahalanobis distance below which a sample matches a component.
    pub match_thresh: f64,
    /// Complexity-reduction prior; every step removes `alpha * c_t` weight.
    pub c_t: f64,
    /// Largest portion of the weight that may belong to foreground objects.
    pub c_f: f64,
    /// Background density threshold. A pixel is background when the
    /// background-component density at the sample exceeds it.
    pub c_thr: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        let alpha = 0.002;
        ModelParams {
            alpha,
            m_max: 4,
            sigma0_sq: 225.0,
            match_thresh: 9.0,
            c_t: 0.05 * alpha,
            c_f: 0.1,
            c_thr: 1e-5,
        }
    }
}

impl ModelParams {
    pub fn var_min(&self) -> f64 {
        VARIANCE_MIN
    }

    pub fn var_max(&self) -> f64 {
        VARIANCE_MAX_FACTOR * self.sigma0_sq
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidArgument(msg));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.m_max == 0 {
            return bad("m_max must be at least 1".into());
        }
        if !(self.sigma0_sq.is_finite() && self.sigma0_sq >= VARIANCE_MIN) {
            return bad(format!(
                "sigma0_sq must be finite and at least {VARIANCE_MIN}, got {}",
                self.sigma0_sq
            ));
        }
        for (name, v) in [
            ("match_thresh", self.match_thresh),
            ("c_t", self.c_t),
            ("c_thr", self.c_thr),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.c_f > 0.0 && self.c_f < 1.0) {
            return bad(format!("c_f must lie in (0, 1), got {}", self.c_f));
        }
        Ok(())
    }
}

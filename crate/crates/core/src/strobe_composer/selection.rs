use super::{ComposeError, Track};

/// Upper bound on bisection steps in [`tune_spacing_for_count`].
pub const MAX_BISECTION_STEPS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStatus {
    /// Count is within the requested range (or no range was requested).
    Met,
    /// Even the tightest spacing yields fewer strobes than asked for.
    Short,
    /// No spacing gave a count inside the range; the selection holds more
    /// strobes than asked for.
    Over,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrobeSelection {
    /// Frame indices in temporal order.
    pub chosen: Vec<u64>,
    pub d_min_used: f64,
    pub status: SelectionStatus,
}

impl StrobeSelection {
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }
}

fn greedy_positions(track: &Track, d_min: f64) -> Vec<usize> {
    let d2 = d_min * d_min;
    let mut accepted: Vec<usize> = Vec::new();
    for (i, entry) in track.entries().iter().enumerate() {
        let (cx, cy) = entry.stats.centroid;
        let clear = accepted.iter().all(|&j| {
            let (ax, ay) = track.entries()[j].stats.centroid;
            let (dx, dy) = (cx - ax, cy - ay);
            dx * dx + dy * dy >= d2
        });
        if clear {
            accepted.push(i);
        }
    }
    accepted
}

fn selection_at(track: &Track, d_min: f64, status: SelectionStatus) -> StrobeSelection {
    StrobeSelection {
        chosen: greedy_positions(track, d_min)
            .into_iter()
            .map(|i| track.entries()[i].frame_index())
            .collect(),
        d_min_used: d_min,
        status,
    }
}

/// Walk the track in time order, keeping an entry when its centroid is at
/// least `d_min` from every entry kept so far.
pub fn select_frames_greedy(track: &Track, d_min: f64) -> Result<StrobeSelection, ComposeError> {
    if !(d_min > 0.0 && d_min.is_finite()) {
        return Err(ComposeError::InvalidArgument(format!(
            "d_min must be positive, got {d_min}"
        )));
    }
    Ok(selection_at(track, d_min, SelectionStatus::Met))
}

/// Largest spacing whose greedy selection has between `n_min` and `n_max`
/// strobes, found by bisection over `[1, frame diagonal]`.
///
/// Bisection relies on the greedy count falling as the spacing grows. That
/// holds when the subject moves monotonically along a line but not for every
/// 2-D path, so on a winding track a valid spacing can be missed and the
/// result reported as [`SelectionStatus::Over`].
pub fn tune_spacing_for_count(
    track: &Track,
    n_min: usize,
    n_max: usize,
) -> Result<StrobeSelection, ComposeError> {
    if n_min == 0 || n_min > n_max {
        return Err(ComposeError::InvalidArgument(format!(
            "target range [{n_min}, {n_max}] must satisfy 1 <= n_min <= n_max"
        )));
    }
    let count = |d: f64| greedy_positions(track, d).len();
    let in_range = |c: usize| (n_min..=n_max).contains(&c);

    let mut lo = 1.0;
    let lo_count = count(lo);
    if lo_count < n_min {
        return Ok(selection_at(track, lo, SelectionStatus::Short));
    }
    let mut hi = track.diagonal().max(lo);
    let hi_count = count(hi);
    if hi_count >= n_min {
        let status = if in_range(hi_count) {
            SelectionStatus::Met
        } else {
            SelectionStatus::Over
        };
        return Ok(selection_at(track, hi, status));
    }

    // count(lo) >= n_min > count(hi)
    let mut best = in_range(lo_count).then_some(lo);
    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let c = count(mid);
        if c >= n_min {
            lo = mid;
            if c <= n_max {
                best = Some(mid);
            }
        } else {
            hi = mid;
        }
    }
    Ok(match best {
        Some(d) => selection_at(track, d, SelectionStatus::Met),
        None => selection_at(track, lo, SelectionStatus::Over),
    })
}

/// 1.5 times the mean bounding-box diagonal of the track's blobs.
pub fn default_spacing(track: &Track) -> Option<f64> {
    if track.is_empty() {
        return None;
    }
    let sum: f64 = track
        .entries()
        .iter()
        .map(|e| e.stats.bbox.diagonal())
        .sum();
    Some(1.5 * sum / track.len() as f64)
}

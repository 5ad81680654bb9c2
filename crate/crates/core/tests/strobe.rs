mod common;

use proptest::prelude::*;

use common::{dist, track_at};
use strobe_core::frame_io::Frame;
use strobe_core::mask_pipeline::BinaryMask;
use strobe_core::strobe_composer::{
    composite, select_frames_greedy, tune_spacing_for_count, SelectionStatus, StrobeSelection,
};

/// Monotone progress along a random direction with random step sizes.
fn arb_line_track() -> impl Strategy<Value = Vec<(f64, f64)>> {
    (
        0.0f64..std::f64::consts::TAU,
        prop::collection::vec(0.0f64..12.0, 1..60),
    )
        .prop_map(|(theta, steps)| {
            let (c, s) = (theta.cos(), theta.sin());
            let mut t = 0.0;
            steps
                .into_iter()
                .map(|d| {
                    t += d;
                    (200.0 + t * c * 0.5, 150.0 + t * s * 0.5)
                })
                .collect()
        })
}

fn arb_free_track() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..400.0, 0.0f64..300.0), 1..40)
}

#[test]
fn greedy_count_can_rise_on_a_winding_path() {
    // (1, 0) blocks both later points at d = 1; at d = 1.01 it is skipped
    // and both are kept.
    let track = track_at(&[(0.0, 0.0), (1.0, 0.0), (1.5, 0.8), (1.5, -0.8)]);
    assert_eq!(select_frames_greedy(&track, 1.0).unwrap().len(), 2);
    assert_eq!(select_frames_greedy(&track, 1.01).unwrap().len(), 3);
}

proptest! {
    #[test]
    fn count_non_increasing_on_lines(points in arb_line_track(), d in 0.5f64..100.0, extra in 0.0f64..50.0) {
        let track = track_at(&points);
        let a = select_frames_greedy(&track, d).unwrap().len();
        let b = select_frames_greedy(&track, d + extra).unwrap().len();
        prop_assert!(b <= a);
    }

    #[test]
    fn greedy_pairwise_spacing(points in arb_free_track(), d in 0.5f64..150.0) {
        let track = track_at(&points);
        let sel = select_frames_greedy(&track, d).unwrap();
        prop_assert!(!sel.chosen.is_empty());
        prop_assert_eq!(sel.chosen[0], 0);
        prop_assert!(sel.chosen.windows(2).all(|w| w[0] < w[1]));
        for (i, &a) in sel.chosen.iter().enumerate() {
            for &b in &sel.chosen[i + 1..] {
                prop_assert!(dist(points[a as usize], points[b as usize]) >= d);
            }
        }
        // every skipped entry is blocked by an earlier kept one
        for (k, &p) in points.iter().enumerate() {
            if !sel.chosen.contains(&(k as u64)) {
                let blocked = sel.chosen.iter().any(|&c| (c as usize) < k && dist(points[c as usize], p) < d);
                prop_assert!(blocked);
            }
        }
    }

    #[test]
    fn tuning_agrees_with_brute_force(points in arb_line_track(), n_min in 1usize..8, span in 0usize..5) {
        let n_max = n_min + span;
        let track = track_at(&points);
        let sel = tune_spacing_for_count(&track, n_min, n_max).unwrap();
        let count_at = |d: f64| select_frames_greedy(&track, d).unwrap().len();
        prop_assert_eq!(sel.len(), count_at(sel.d_min_used));
        // integer spacings from 1 to the diagonal as the brute-force reference
        let reachable = (1..=track.diagonal().ceil() as u64)
            .any(|d| (n_min..=n_max).contains(&count_at(d as f64)));
        match sel.status {
            SelectionStatus::Met => prop_assert!((n_min..=n_max).contains(&sel.len())),
            SelectionStatus::Short => {
                prop_assert!(sel.len() < n_min);
                prop_assert!(!reachable);
            }
            SelectionStatus::Over => {
                prop_assert!(sel.len() > n_max);
                prop_assert!(!reachable);
            }
        }
    }

    #[test]
    fn composite_pixels_come_from_one_source(
        w in 2usize..12,
        h in 2usize..12,
        layers in prop::collection::vec(prop::collection::vec(any::<bool>(), 144), 0..5),
    ) {
        // each source is a flat frame tagged by its colour
        let tag = |i: usize| [i as u8 + 1, 0, 0];
        let background = Frame::filled(w, h, [0, 0, 0]);
        let frames: Vec<Frame> = (0..layers.len())
            .map(|i| Frame::filled(w, h, tag(i)).with_index(i as u64 * 3, 0.0))
            .collect();
        let masks: Vec<BinaryMask> = layers
            .iter()
            .map(|bits| BinaryMask::from_bits(w, h, bits[..w * h].to_vec()).unwrap())
            .collect();
        let selection = StrobeSelection {
            chosen: (0..layers.len() as u64).map(|i| i * 3).collect(),
            d_min_used: 1.0,
            status: SelectionStatus::Met,
        };
        let out = composite(&background, &selection, &frames, &masks).unwrap();
        for y in 0..h {
            for x in 0..w {
                let last = (0..masks.len()).rev().find(|&i| masks[i].get(x, y));
                let expected = last.map_or([0, 0, 0], tag);
                prop_assert_eq!(out.pixel(x, y), expected);
            }
        }
        let again = composite(&background, &selection, &frames, &masks).unwrap();
        prop_assert_eq!(out, again);
    }
}

//! Limited-range BT.601 (Kr = 0.299, Kb = 0.114).
//!
//! Luma is nominally [16, 235] and chroma [16, 240], centered at 128.

use super::round_to_u8;

const Y_SCALE: f64 = 255.0 / 219.0;
const C_SCALE: f64 = 255.0 / 224.0;

const KR: f64 = 0.299;
const KB: f64 = 0.114;
const KG: f64 = 1.0 - KR - KB;

/// Convert one limited-range BT.601 sample to 8-bit RGB.
pub fn yuv_to_rgb(y: u8, u: u8, v: u8) -> [u8; 3] {
    let yy = Y_SCALE * (y as f64 - 16.0);
    let cb = C_SCALE * (u as f64 - 128.0);
    let cr = C_SCALE * (v as f64 - 128.0);

    let r = yy + 2.0 * (1.0 - KR) * cr;
    let g = yy - (2.0 * (1.0 - KB) * KB / KG) * cb - (2.0 * (1.0 - KR) * KR / KG) * cr;
    let b = yy + 2.0 * (1.0 - KB) * cb;
    [round_to_u8(r), round_to_u8(g), round_to_u8(b)]
}

/// Forward transform, unrounded. Returns (Y, Cb, Cr) in 8-bit code values.
pub fn rgb_to_yuv(rgb: [u8; 3]) -> [f64; 3] {
    let r = rgb[0] as f64 / 255.0;
    let g = rgb[1] as f64 / 255.0;
    let b = rgb[2] as f64 / 255.0;
    let luma = KR * r + KG * g + KB * b;
    let cb = (b - luma) / (2.0 * (1.0 - KB));
    let cr = (r - luma) / (2.0 * (1.0 - KR));
    [16.0 + 219.0 * luma, 128.0 + 224.0 * cb, 128.0 + 224.0 * cr]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn black_and_white_points() {
        assert_eq!(yuv_to_rgb(16, 128, 128), [0, 0, 0]);
        assert_eq!(yuv_to_rgb(235, 128, 128), [255, 255, 255]);
    }

    #[test]
    fn pure_red_inverts_within_two() {
        // Hand-applied forward matrix for (255, 0, 0):
        // Y = 16 + 219 * 0.299 = 81.48, Cb = 128 - 224 * 0.1687 = 90.2, Cr = 240.
        let rgb = yuv_to_rgb(81, 90, 240);
        for (got, want) in rgb.iter().zip([255u8, 0, 0]) {
            assert!((*got as i32 - want as i32).abs() <= 2, "{rgb:?}");
        }
        let fwd = rgb_to_yuv([255, 0, 0]);
        assert!((fwd[0] - 81.481).abs() < 1e-3);
        assert!((fwd[1] - 90.203).abs() < 1e-3);
        assert!((fwd[2] - 240.0).abs() < 1e-9);
    }

    #[test]
    fn out_of_nominal_inputs_clamp() {
        assert_eq!(yuv_to_rgb(0, 128, 128), [0, 0, 0]);
        assert_eq!(yuv_to_rgb(255, 128, 128), [255, 255, 255]);
        assert_eq!(yuv_to_rgb(255, 255, 255)[0], 255);
    }

    #[test]
    fn monotone_in_luma_on_gray_axis() {
        let mut prev = yuv_to_rgb(0, 128, 128);
        for y in 1..=255u8 {
            let cur = yuv_to_rgb(y, 128, 128);
            for c in 0..3 {
                assert!(cur[c] >= prev[c], "y={y}");
            }
            prev = cur;
        }
    }

    #[test]
    fn forward_then_inverse_is_close() {
        for &rgb in &[[10u8, 200, 30], [128, 128, 128], [250, 5, 120], [0, 0, 255]] {
            let [y, u, v] = rgb_to_yuv(rgb);
            let back = yuv_to_rgb(round_to_u8(y), round_to_u8(u), round_to_u8(v));
            for c in 0..3 {
                assert!(
                    (back[c] as i32 - rgb[c] as i32).abs() <= 2,
                    "{rgb:?} -> {back:?}"
                );
            }
        }
    }
}

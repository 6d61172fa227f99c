//! HSV and BT.601 full-range YCbCr conversions.
//!
//! Hue is stored in turns, [0, 1). Chroma planes use 0.5 as the neutral
//! point, the unit-scale equivalent of 128 on 8-bit data.

use super::ImageBuf;

const KR: f64 = 0.299;
const KB: f64 = 0.114;
const KG: f64 = 1.0 - KR - KB;

#[inline]
pub(crate) fn rgb_px_to_hsv([r, g, b]: [f64; 3]) -> [f64; 3] {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    if delta <= 0.0 {
        return [0.0, s, v];
    }
    let h6 = if max == r {
        ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let mut h = h6 / 6.0;
    if h >= 1.0 {
        h -= 1.0;
    }
    [h, s, v]
}

#[inline]
pub(crate) fn hsv_px_to_rgb([h, s, v]: [f64; 3]) -> [f64; 3] {
    if s <= 0.0 {
        return [v, v, v];
    }
    let h6 = h.rem_euclid(1.0) * 6.0;
    let sector = h6.floor();
    let f = h6 - sector;
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    match sector as u8 % 6 {
        0 => [v, t, p],
        1 => [q, v, p],
        2 => [p, v, t],
        3 => [p, q, v],
        4 => [t, p, v],
        _ => [v, p, q],
    }
}

#[inline]
pub(crate) fn rgb_px_to_ycbcr([r, g, b]: [f64; 3]) -> [f64; 3] {
    let y = KR * r + KG * g + KB * b;
    let cb = 0.5 + (b - y) / (2.0 * (1.0 - KB));
    let cr = 0.5 + (r - y) / (2.0 * (1.0 - KR));
    [y, cb, cr]
}

#[inline]
pub(crate) fn ycbcr_px_to_rgb([y, cb, cr]: [f64; 3]) -> [f64; 3] {
    let r = y + 2.0 * (1.0 - KR) * (cr - 0.5);
    let b = y + 2.0 * (1.0 - KB) * (cb - 0.5);
    let g = (y - KR * r - KB * b) / KG;
    [r, g, b]
}

/// Convert to an HSV buffer laid out like the RGB one (H, S, V per pixel).
pub fn rgb_to_hsv(img: &ImageBuf) -> ImageBuf {
    img.map_pixels(rgb_px_to_hsv)
}

pub fn hsv_to_rgb(hsv: &ImageBuf) -> ImageBuf {
    hsv.map_pixels(hsv_px_to_rgb)
}

/// Convert to a (Y, Cb, Cr) buffer.
pub fn rgb_to_ycbcr(img: &ImageBuf) -> ImageBuf {
    img.map_pixels(rgb_px_to_ycbcr)
}

pub fn ycbcr_to_rgb(ycc: &ImageBuf) -> ImageBuf {
    ycc.map_pixels(ycbcr_px_to_rgb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pure_red_and_gray() {
        assert_eq!(rgb_px_to_hsv([1.0, 0.0, 0.0]), [0.0, 1.0, 1.0]);
        let [_, s, v] = rgb_px_to_hsv([0.5, 0.5, 0.5]);
        assert_eq!((s, v), (0.0, 0.5));
        let [h, _, _] = rgb_px_to_hsv([0.0, 0.0, 1.0]);
        assert!((h - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ycbcr_fixed_points() {
        let [y, cb, cr] = rgb_px_to_ycbcr([0.3, 0.3, 0.3]);
        assert!((y - 0.3).abs() < 1e-15);
        assert_eq!((cb, cr), (0.5, 0.5));
        let [y, _, _] = rgb_px_to_ycbcr([1.0, 1.0, 1.0]);
        assert!((y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ycbcr_stays_in_unit_range_for_primaries() {
        for px in [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 1.0],
        ] {
            for c in rgb_px_to_ycbcr(px) {
                assert!((-1e-12..=1.0 + 1e-12).contains(&c), "{px:?} -> {c}");
            }
        }
    }

    #[test]
    fn image_level_round_trip() {
        let img = ImageBuf::from_fn(7, 5, |x, y| {
            [x as f64 / 7.0, y as f64 / 5.0, ((x * y) % 3) as f64 / 3.0]
        })
        .unwrap();
        let back = hsv_to_rgb(&rgb_to_hsv(&img));
        let back2 = ycbcr_to_rgb(&rgb_to_ycbcr(&img));
        for ((a, b), c) in img.data().iter().zip(back.data()).zip(back2.data()) {
            assert!((a - b).abs() < 1e-6);
            assert!((a - c).abs() < 1e-6);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn hsv_round_trip(r in 0.0f64..=1.0, g in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let hsv = rgb_px_to_hsv([r, g, b]);
            prop_assert!((0.0..1.0).contains(&hsv[0]));
            prop_assert!((0.0..=1.0).contains(&hsv[1]));
            let back = hsv_px_to_rgb(hsv);
            for (x, y) in [r, g, b].iter().zip(back) {
                prop_assert!((x - y).abs() < 1e-6);
            }
        }

        #[test]
        fn ycbcr_round_trip(r in 0.0f64..=1.0, g in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let back = ycbcr_px_to_rgb(rgb_px_to_ycbcr([r, g, b]));
            for (x, y) in [r, g, b].iter().zip(back) {
                prop_assert!((x - y).abs() < 1e-6);
            }
        }
    }
}

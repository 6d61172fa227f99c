//! Point-wise tone edits plus over-sharpening and pixelation.

use super::blur::gaussian_raw;
use crate::error::Result;
use crate::image::{
    hsv_px_to_rgb, resample, rgb_px_to_hsv, rgb_px_to_ycbcr, ycbcr_px_to_rgb, ImageBuf,
    ResampleMode,
};

pub(super) fn value_shift(img: &ImageBuf, delta: f64) -> ImageBuf {
    img.map_pixels(|px| {
        let [h, s, v] = rgb_px_to_hsv(px);
        hsv_px_to_rgb([h, s, (v + delta).clamp(0.0, 1.0)])
    })
}

pub(super) fn rgb_shift(img: &ImageBuf, delta: f64) -> ImageBuf {
    img.map_pixels(|px| px.map(|c| c + delta))
}

pub(super) fn value_gamma(img: &ImageBuf, gamma: f64) -> ImageBuf {
    img.map_pixels(|px| {
        let [h, s, v] = rgb_px_to_hsv(px);
        hsv_px_to_rgb([h, s, v.powf(gamma)])
    })
}

pub(super) fn rgb_gamma(img: &ImageBuf, gamma: f64) -> ImageBuf {
    img.map_pixels(|px| px.map(|c| c.powf(gamma)))
}

/// `mean * (1 - alpha) + I * alpha` with the scalar global mean.
pub(super) fn contrast_scale(img: &ImageBuf, alpha: f64) -> ImageBuf {
    let mean = img.mean();
    img.map_pixels(|px| px.map(|c| mean * (1.0 - alpha) + c * alpha))
}

/// `1 / (1 + (mean_c / (I + eps))^alpha)` with per-channel means.
pub(super) fn contrast_stretch(img: &ImageBuf, alpha: f64, epsilon: f64) -> ImageBuf {
    let means = img.channel_means();
    img.map_pixels(|px| {
        let mut out = [0.0; 3];
        for c in 0..3 {
            out[c] = 1.0 / (1.0 + (means[c] / (px[c] + epsilon)).powf(alpha));
        }
        out
    })
}

pub(super) fn saturation_hsv(img: &ImageBuf, scale: f64) -> ImageBuf {
    img.map_pixels(|px| {
        let [h, s, v] = rgb_px_to_hsv(px);
        hsv_px_to_rgb([h, (s * scale).clamp(0.0, 1.0), v])
    })
}

/// Scale chroma about the neutral point 0.5.
pub(super) fn saturation_ycbcr(img: &ImageBuf, scale: f64) -> ImageBuf {
    img.map_pixels(|px| {
        let [y, cb, cr] = rgb_px_to_ycbcr(px);
        ycbcr_px_to_rgb([y, 0.5 + (cb - 0.5) * scale, 0.5 + (cr - 0.5) * scale])
    })
}

/// `I * (1 + alpha) - blur(I) * alpha`.
pub(super) fn over_sharpen(img: &ImageBuf, alpha: f64, blur_sigma: f64, kernel_size: usize) -> ImageBuf {
    let blurred = gaussian_raw(img, blur_sigma, kernel_size);
    let data = img
        .data()
        .iter()
        .zip(&blurred)
        .map(|(&i, &b)| i * (1.0 + alpha) - b * alpha)
        .collect();
    ImageBuf::from_raw(img.width(), img.height(), data)
}

/// Box-downsample by `factor`, then nearest-upsample to the original size.
pub(super) fn pixelate(img: &ImageBuf, factor: f64) -> Result<ImageBuf> {
    let (w, h) = (img.width(), img.height());
    let sw = ((w as f64 * factor).round() as usize).max(1);
    let sh = ((h as f64 * factor).round() as usize).max(1);
    let small = resample(img, sw, sh, ResampleMode::Box)?;
    resample(&small, w, h, ResampleMode::Nearest)
}

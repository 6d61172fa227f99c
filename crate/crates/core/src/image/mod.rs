//! Floating-point RGB images and the pixel primitives distortions build on.

mod color;
mod filter;
mod io;
mod resample;

pub use color::{hsv_to_rgb, rgb_to_hsv, rgb_to_ycbcr, ycbcr_to_rgb};
pub(crate) use color::{hsv_px_to_rgb, rgb_px_to_hsv, rgb_px_to_ycbcr, ycbcr_px_to_rgb};
pub use filter::{convolve2d, Kernel};
pub(crate) use filter::{correlate_raw, correlate_separable_raw};
pub use io::{decode_image, encode_image, load_image, save_image, ImageFormat};
pub use resample::{resample, ResampleMode};

use crate::error::{Error, Result};

/// Row-major interleaved RGB image with channels in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuf {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageBuf {
    /// Build from interleaved RGB data. Values are clamped to [0, 1]; NaN is
    /// rejected.
    pub fn new(width: usize, height: usize, mut data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if data.len() != width * height * 3 {
            return Err(Error::InvalidImage(format!(
                "expected {} values for {width}x{height}x3, got {}",
                width * height * 3,
                data.len()
            )));
        }
        if data.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidImage("NaN channel value".into()));
        }
        clamp_unit(&mut data);
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            data.extend_from_slice(&rgb);
        }
        Self::new(width, height, data)
    }

    /// Build from a per-pixel function `f(x, y) -> rgb`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Internal constructor for buffers whose shape is already known valid;
    /// clamps but skips the shape checks.
    pub(crate) fn from_raw(width: usize, height: usize, mut data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height * 3);
        clamp_unit(&mut data);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// Pixel lookup with replicate padding.
    #[inline]
    pub(crate) fn pixel_clamped(&self, x: isize, y: isize) -> [f64; 3] {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.pixel(xc, yc)
    }

    /// Mean over every channel of every pixel.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Per-channel means.
    pub fn channel_means(&self) -> [f64; 3] {
        let mut sums = [0.0; 3];
        for px in self.data.chunks_exact(3) {
            for c in 0..3 {
                sums[c] += px[c];
            }
        }
        let n = (self.width * self.height) as f64;
        sums.map(|s| s / n)
    }

    /// Apply `f` to each pixel, clamping the result.
    pub fn map_pixels(&self, mut f: impl FnMut([f64; 3]) -> [f64; 3]) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for px in self.data.chunks_exact(3) {
            data.extend_from_slice(&f([px[0], px[1], px[2]]));
        }
        Self::from_raw(self.width, self.height, data)
    }

    /// Quantize to 8-bit RGB (`round(v * 255)`).
    pub fn to_rgb8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| to_u8(v)).collect()
    }

    pub fn from_rgb8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        let data = bytes.iter().map(|&b| f64::from(b) / 255.0).collect();
        Self::new(width, height, data)
    }

    /// Round every channel to the nearest 8-bit level.
    pub fn quantized_8bit(&self) -> Self {
        Self::from_raw(
            self.width,
            self.height,
            self.data
                .iter()
                .map(|&v| f64::from(to_u8(v)) / 255.0)
                .collect(),
        )
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

#[inline]
pub(crate) fn clamp_unit(data: &mut [f64]) {
    for v in data {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Peak signal-to-noise ratio in dB with peak 1.0, `10 log10(1 / MSE)`.
/// Identical images give `f64::INFINITY`.
pub fn psnr(a: &ImageBuf, b: &ImageBuf) -> Result<f64> {
    a.same_shape(b)?;
    let sse: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let mse = sse / a.data.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

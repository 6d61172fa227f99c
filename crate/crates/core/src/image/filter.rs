use rayon::prelude::*;

use super::ImageBuf;
use crate::error::{Error, Result};

/// A 2-D filter kernel with odd width and height, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self> {
        if width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::EvenKernel(width, height));
        }
        if weights.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "kernel {width}x{height} needs {} weights, got {}",
                width * height,
                weights.len()
            )));
        }
        Ok(Self {
            width,
            height,
            weights,
        })
    }

    /// Uniform averaging kernel of the given (odd) size.
    pub fn boxed(size: usize) -> Result<Self> {
        let n = size * size;
        Self::new(size, size, vec![1.0 / n as f64; n])
    }

    /// Rescale so the weights sum to one.
    pub fn normalized(mut self) -> Self {
        let sum: f64 = self.weights.iter().sum();
        if sum != 0.0 {
            for w in &mut self.weights {
                *w /= sum;
            }
        }
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Per-channel correlation with replicate padding; output clamped to [0, 1].
pub fn convolve2d(img: &ImageBuf, kernel: &Kernel) -> Result<ImageBuf> {
    let out = correlate_raw(img.data(), img.width(), img.height(), kernel);
    Ok(ImageBuf::from_raw(img.width(), img.height(), out))
}

/// Correlation over an interleaved RGB slice without clamping.
pub(crate) fn correlate_raw(data: &[f64], width: usize, height: usize, kernel: &Kernel) -> Vec<f64> {
    let rx = (kernel.width / 2) as isize;
    let ry = (kernel.height / 2) as isize;
    let mut out = vec![0.0; data.len()];
    out.par_chunks_mut(width * 3)
        .enumerate()
        .for_each(|(y, row)| {
            for x in 0..width {
                let mut acc = [0.0; 3];
                for ky in 0..kernel.height {
                    let sy = (y as isize + ky as isize - ry).clamp(0, height as isize - 1) as usize;
                    let src_row = &data[sy * width * 3..(sy + 1) * width * 3];
                    let krow = &kernel.weights[ky * kernel.width..(ky + 1) * kernel.width];
                    for (kx, &w) in krow.iter().enumerate() {
                        if w == 0.0 {
                            continue;
                        }
                        let sx = (x as isize + kx as isize - rx).clamp(0, width as isize - 1)
                            as usize;
                        let p = &src_row[sx * 3..sx * 3 + 3];
                        acc[0] += w * p[0];
                        acc[1] += w * p[1];
                        acc[2] += w * p[2];
                    }
                }
                row[x * 3..x * 3 + 3].copy_from_slice(&acc);
            }
        });
    out
}

/// Separable correlation (horizontal pass then vertical), replicate padding,
/// no clamping. Both taps must have odd length.
pub(crate) fn correlate_separable_raw(
    data: &[f64],
    width: usize,
    height: usize,
    taps_x: &[f64],
    taps_y: &[f64],
) -> Vec<f64> {
    debug_assert!(taps_x.len() % 2 == 1 && taps_y.len() % 2 == 1);
    let rx = (taps_x.len() / 2) as isize;
    let ry = (taps_y.len() / 2) as isize;
    let mut tmp = vec![0.0; data.len()];
    tmp.par_chunks_mut(width * 3)
        .enumerate()
        .for_each(|(y, row)| {
            let src = &data[y * width * 3..(y + 1) * width * 3];
            for x in 0..width {
                let mut acc = [0.0; 3];
                for (k, &w) in taps_x.iter().enumerate() {
                    let sx = (x as isize + k as isize - rx).clamp(0, width as isize - 1) as usize;
                    for c in 0..3 {
                        acc[c] += w * src[sx * 3 + c];
                    }
                }
                row[x * 3..x * 3 + 3].copy_from_slice(&acc);
            }
        });
    let mut out = vec![0.0; data.len()];
    out.par_chunks_mut(width * 3)
        .enumerate()
        .for_each(|(y, row)| {
            for (k, &w) in taps_y.iter().enumerate() {
                let sy = (y as isize + k as isize - ry).clamp(0, height as isize - 1) as usize;
                let src = &tmp[sy * width * 3..(sy + 1) * width * 3];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += w * s;
                }
            }
        });
    out
}

use std::f64::consts::PI;

use rayon::prelude::*;

use super::domain;
use super::params::gaussian_kernel_size;
use crate::error::Result;
use crate::image::{correlate_raw, correlate_separable_raw, ImageBuf, Kernel};
use crate::rng::CounterRng;

/// Normalized 1-D Gaussian taps of odd length `size`.
pub(crate) fn gaussian_taps(sigma: f64, size: usize) -> Vec<f64> {
    let r = (size / 2) as isize;
    if sigma <= 0.0 || size == 1 {
        let mut t = vec![0.0; size];
        t[size / 2] = 1.0;
        return t;
    }
    let mut taps: Vec<f64> = (-r..=r)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Gaussian-filtered copy of `data` without clamping.
pub(crate) fn gaussian_raw(img: &ImageBuf, sigma: f64, size: usize) -> Vec<f64> {
    let taps = gaussian_taps(sigma, size);
    correlate_separable_raw(img.data(), img.width(), img.height(), &taps, &taps)
}

pub(super) fn gaussian(img: &ImageBuf, sigma: f64, kernel_size: usize) -> ImageBuf {
    if kernel_size <= 1 {
        return img.clone();
    }
    ImageBuf::from_raw(img.width(), img.height(), gaussian_raw(img, sigma, kernel_size))
}

pub(crate) fn motion_kernel_size(radius: u32) -> usize {
    let half = (radius.saturating_sub(1) as f64 / 2.0).ceil() as usize + 1;
    2 * half + 1
}

/// Line kernel of `radius` taps centred on the origin at `angle`, weights
/// `exp(-t^2 / 2 sigma^2)` along the line, splatted bilinearly onto the grid.
pub(crate) fn motion_kernel(radius: u32, sigma: f64, angle: f64) -> Result<Kernel> {
    let size = motion_kernel_size(radius);
    let c = (size / 2) as f64;
    let mut w = vec![0.0; size * size];
    let (dx, dy) = (angle.cos(), angle.sin());
    let centre = (radius.max(1) as f64 - 1.0) / 2.0;
    for i in 0..radius.max(1) {
        let t = i as f64 - centre;
        let g = if sigma > 0.0 {
            (-t * t / (2.0 * sigma * sigma)).exp()
        } else {
            1.0
        };
        let (px, py) = (c + t * dx, c + t * dy);
        let (x0, y0) = (px.floor(), py.floor());
        let (fx, fy) = (px - x0, py - y0);
        for (ox, oy, wt) in [
            (0, 0, (1.0 - fx) * (1.0 - fy)),
            (1, 0, fx * (1.0 - fy)),
            (0, 1, (1.0 - fx) * fy),
            (1, 1, fx * fy),
        ] {
            let (x, y) = (x0 as usize + ox, y0 as usize + oy);
            if x < size && y < size {
                w[y * size + x] += g * wt;
            }
        }
    }
    Ok(Kernel::new(size, size, w)?.normalized())
}

pub(super) fn motion(img: &ImageBuf, radius: u32, sigma: f64, seed: u64) -> Result<ImageBuf> {
    let angle = CounterRng::new(seed, domain::MOTION_ANGLE, 0).uniform() * PI;
    let kernel = motion_kernel(radius, sigma, angle)?;
    Ok(ImageBuf::from_raw(
        img.width(),
        img.height(),
        correlate_raw(img.data(), img.width(), img.height(), &kernel),
    ))
}

/// Disk of radius `radius` (pixels with x^2 + y^2 <= r^2), averaged.
pub(crate) fn disk_kernel(radius: u32) -> Result<Kernel> {
    let r = radius as isize;
    let size = 2 * radius as usize + 1;
    let mut w = Vec::with_capacity(size * size);
    for y in -r..=r {
        for x in -r..=r {
            w.push(if x * x + y * y <= r * r { 1.0 } else { 0.0 });
        }
    }
    Ok(Kernel::new(size, size, w)?.normalized())
}

pub(super) fn lens(img: &ImageBuf, radius: u32) -> Result<ImageBuf> {
    let kernel = disk_kernel(radius)?;
    Ok(ImageBuf::from_raw(
        img.width(),
        img.height(),
        correlate_raw(img.data(), img.width(), img.height(), &kernel),
    ))
}

/// Gaussian filter, then `iterations` rounds of moving every pixel to a
/// random integer offset in `[-shift, shift]^2`.
pub(super) fn glass(img: &ImageBuf, sigma: f64, shift: u32, iterations: u32, seed: u64) -> ImageBuf {
    let (w, h) = (img.width(), img.height());
    let mut cur = gaussian_raw(img, sigma, gaussian_kernel_size(sigma));
    let s = i64::from(shift);
    for it in 0..iterations {
        let src = cur;
        let mut next = vec![0.0; src.len()];
        next.par_chunks_mut(w * 3).enumerate().for_each(|(y, row)| {
            for x in 0..w {
                let idx = (y * w + x) as u64;
                let mut rng = CounterRng::new(seed, domain::GLASS, (u64::from(it) << 40) | idx);
                let dx = rng.int_inclusive(-s, s);
                let dy = rng.int_inclusive(-s, s);
                let sx = (x as i64 + dx).clamp(0, w as i64 - 1) as usize;
                let sy = (y as i64 + dy).clamp(0, h as i64 - 1) as usize;
                let o = (sy * w + sx) * 3;
                row[x * 3..x * 3 + 3].copy_from_slice(&src[o..o + 3]);
            }
        });
        cur = next;
    }
    ImageBuf::from_raw(w, h, cur)
}

#[inline]
fn sample_bilinear(img: &ImageBuf, sx: f64, sy: f64) -> [f64; 3] {
    let x0 = sx.floor();
    let y0 = sy.floor();
    let (fx, fy) = (sx - x0, sy - y0);
    let (x0, y0) = (x0 as isize, y0 as isize);
    let p00 = img.pixel_clamped(x0, y0);
    let p10 = img.pixel_clamped(x0 + 1, y0);
    let p01 = img.pixel_clamped(x0, y0 + 1);
    let p11 = img.pixel_clamped(x0 + 1, y0 + 1);
    let mut out = [0.0; 3];
    for c in 0..3 {
        let top = p00[c] * (1.0 - fx) + p10[c] * fx;
        let bottom = p01[c] * (1.0 - fx) + p11[c] * fx;
        out[c] = top * (1.0 - fy) + bottom * fy;
    }
    out
}

/// Mean of the original and `steps` centre zooms with factors evenly spaced
/// in `(1, max_zoom]`.
pub(super) fn zoom(img: &ImageBuf, max_zoom: f64, steps: u32) -> ImageBuf {
    let (w, h) = (img.width(), img.height());
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let zooms: Vec<f64> = (1..=steps)
        .map(|k| 1.0 + (max_zoom - 1.0) * f64::from(k) / f64::from(steps))
        .collect();
    let n = (zooms.len() + 1) as f64;
    let mut out = img.data().to_vec();
    out.par_chunks_mut(w * 3).enumerate().for_each(|(y, row)| {
        for x in 0..w {
            let mut acc = [row[x * 3], row[x * 3 + 1], row[x * 3 + 2]];
            for &z in &zooms {
                let sx = cx + (x as f64 + 0.5 - cx) / z - 0.5;
                let sy = cy + (y as f64 + 0.5 - cy) / z - 0.5;
                let p = sample_bilinear(img, sx, sy);
                for c in 0..3 {
                    acc[c] += p[c];
                }
            }
            for c in 0..3 {
                row[x * 3 + c] = acc[c] / n;
            }
        }
    });
    ImageBuf::from_raw(w, h, out)
}

/// Mean of `copies` versions, each displacing every pixel independently by
/// integers in `[-shift, shift]^2` (nearest sampling, replicate borders).
pub(super) fn jitter(img: &ImageBuf, shift: u32, copies: u32, seed: u64) -> ImageBuf {
    let (w, h) = (img.width(), img.height());
    let s = i64::from(shift);
    let n = f64::from(copies.max(1));
    let mut out = vec![0.0; w * h * 3];
    out.par_chunks_mut(w * 3).enumerate().for_each(|(y, row)| {
        for x in 0..w {
            let idx = (y * w + x) as u64;
            let mut rng = CounterRng::new(seed, domain::JITTER, idx);
            let mut acc = [0.0; 3];
            for _ in 0..copies.max(1) {
                let dx = rng.int_inclusive(-s, s);
                let dy = rng.int_inclusive(-s, s);
                let p = img.pixel_clamped(x as isize + dx as isize, y as isize + dy as isize);
                for c in 0..3 {
                    acc[c] += p[c];
                }
            }
            for c in 0..3 {
                row[x * 3 + c] = acc[c] / n;
            }
        }
    });
    ImageBuf::from_raw(w, h, out)
}

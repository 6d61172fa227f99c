use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;

use super::domain;
use crate::error::{Error, Result};
use crate::image::{correlate_raw, rgb_px_to_ycbcr, ycbcr_px_to_rgb, ImageBuf, Kernel};
use crate::rng::CounterRng;

/// Run `f` on every pixel with that pixel's own random stream.
fn per_pixel(
    img: &ImageBuf,
    seed: u64,
    dom: u64,
    f: impl Fn(&mut CounterRng, [f64; 3]) -> [f64; 3] + Sync,
) -> Vec<f64> {
    let mut out = img.data().to_vec();
    out.par_chunks_mut(3).enumerate().for_each(|(i, px)| {
        let mut rng = CounterRng::new(seed, dom, i as u64);
        let r = f(&mut rng, [px[0], px[1], px[2]]);
        px.copy_from_slice(&r);
    });
    out
}

#[inline]
fn normal(rng: &mut CounterRng) -> f64 {
    rng.sample(StandardNormal)
}

pub(super) fn gaussian_rgb(img: &ImageBuf, sigma: f64, seed: u64) -> ImageBuf {
    let data = per_pixel(img, seed, domain::NOISE_RGB, |rng, px| {
        px.map(|v| v + sigma * normal(rng))
    });
    ImageBuf::from_raw(img.width(), img.height(), data)
}

/// Additive noise on Y, Cr and Cb; all sigmas on the unit scale.
pub(super) fn gaussian_ycbcr(
    img: &ImageBuf,
    sigma_luma: f64,
    sigma_cr: f64,
    sigma_cb: f64,
    seed: u64,
) -> ImageBuf {
    let data = per_pixel(img, seed, domain::NOISE_YCBCR, |rng, px| {
        let [y, cb, cr] = rgb_px_to_ycbcr(px);
        let y = y + sigma_luma * normal(rng);
        let cr = cr + sigma_cr * normal(rng);
        let cb = cb + sigma_cb * normal(rng);
        ycbcr_px_to_rgb([y, cb, cr])
    });
    ImageBuf::from_raw(img.width(), img.height(), data)
}

/// Multiplicative noise, `I * (1 + N(0, sigma^2))`.
pub(super) fn speckle(img: &ImageBuf, sigma: f64, seed: u64) -> ImageBuf {
    let data = per_pixel(img, seed, domain::SPECKLE, |rng, px| {
        px.map(|v| v * (1.0 + sigma * normal(rng)))
    });
    ImageBuf::from_raw(img.width(), img.height(), data)
}

/// Additive Gaussian noise followed by a `window` x `window` average; the
/// noisy intermediate is not clamped.
pub(super) fn correlated(img: &ImageBuf, sigma: f64, window: usize, seed: u64) -> Result<ImageBuf> {
    let noisy = per_pixel(img, seed, domain::CORRELATED, |rng, px| {
        px.map(|v| v + sigma * normal(rng))
    });
    let k = Kernel::boxed(window)?;
    Ok(ImageBuf::from_raw(
        img.width(),
        img.height(),
        correlate_raw(&noisy, img.width(), img.height(), &k),
    ))
}

/// `Poisson(I * interval) / interval` per channel; smaller intervals are
/// noisier.
pub(super) fn poisson(img: &ImageBuf, interval: f64, seed: u64) -> Result<ImageBuf> {
    if !(interval > 0.0 && interval.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "poisson interval must be positive, got {interval}"
        )));
    }
    let data = per_pixel(img, seed, domain::POISSON, |rng, px| {
        px.map(|v| {
            let lambda = v * interval;
            if lambda <= 0.0 {
                return 0.0;
            }
            let dist = Poisson::new(lambda).expect("positive finite rate");
            dist.sample(rng) / interval
        })
    });
    Ok(ImageBuf::from_raw(img.width(), img.height(), data))
}

/// Salt and pepper: with probability `density` a pixel becomes black or
/// white (equal odds).
pub(super) fn impulse(img: &ImageBuf, density: f64, seed: u64) -> ImageBuf {
    let data = per_pixel(img, seed, domain::IMPULSE, |rng, px| {
        if rng.uniform() < density {
            if rng.uniform() < 0.5 {
                [0.0; 3]
            } else {
                [1.0; 3]
            }
        } else {
            px
        }
    });
    ImageBuf::from_raw(img.width(), img.height(), data)
}

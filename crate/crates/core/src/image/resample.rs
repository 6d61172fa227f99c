use serde::{Deserialize, Serialize};

use super::ImageBuf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResampleMode {
    /// Area average over the source footprint of each output pixel.
    Box,
    Nearest,
    Bilinear,
    /// Keys cubic convolution, a = -0.5.
    Bicubic,
}

/// Contribution list for one output coordinate along one axis.
type Taps = Vec<(usize, f64)>;

fn axis_taps(src: usize, dst: usize, mode: ResampleMode) -> Vec<Taps> {
    let scale = src as f64 / dst as f64;
    let last = src as isize - 1;
    let clamp = |i: isize| i.clamp(0, last) as usize;
    (0..dst)
        .map(|o| match mode {
            ResampleMode::Box => {
                let lo = o as f64 * scale;
                let hi = (o + 1) as f64 * scale;
                let mut taps = Vec::new();
                let mut i = lo.floor() as usize;
                while (i as f64) < hi && i < src {
                    let overlap = (hi.min(i as f64 + 1.0) - lo.max(i as f64)).max(0.0);
                    if overlap > 0.0 {
                        taps.push((i, overlap / (hi - lo)));
                    }
                    i += 1;
                }
                taps
            }
            ResampleMode::Nearest => {
                let s = ((o as f64 + 0.5) * scale).floor() as isize;
                vec![(clamp(s), 1.0)]
            }
            ResampleMode::Bilinear => {
                let s = (o as f64 + 0.5) * scale - 0.5;
                let i0 = s.floor();
                let t = s - i0;
                let i0 = i0 as isize;
                vec![(clamp(i0), 1.0 - t), (clamp(i0 + 1), t)]
            }
            ResampleMode::Bicubic => {
                let s = (o as f64 + 0.5) * scale - 0.5;
                let i0 = s.floor();
                let t = s - i0;
                let i0 = i0 as isize;
                (-1..=2)
                    .map(|k| (clamp(i0 + k), cubic(t - k as f64)))
                    .collect()
            }
        })
        .collect()
}

fn cubic(x: f64) -> f64 {
    const A: f64 = -0.5;
    let x = x.abs();
    if x <= 1.0 {
        ((A + 2.0) * x - (A + 3.0)) * x * x + 1.0
    } else if x < 2.0 {
        ((A * x - 5.0 * A) * x + 8.0 * A) * x - 4.0 * A
    } else {
        0.0
    }
}

/// Resize to `new_w` x `new_h`. Unchanged dimensions return the input as is.
pub fn resample(img: &ImageBuf, new_w: usize, new_h: usize, mode: ResampleMode) -> Result<ImageBuf> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::InvalidArgument(format!(
            "target size {new_w}x{new_h} must be positive"
        )));
    }
    let (w, h) = (img.width(), img.height());
    if (w, h) == (new_w, new_h) {
        return Ok(img.clone());
    }
    let xt = axis_taps(w, new_w, mode);
    let yt = axis_taps(h, new_h, mode);
    let src = img.data();

    // Horizontal pass: h rows x new_w columns.
    let mut tmp = vec![0.0; h * new_w * 3];
    for y in 0..h {
        for (x, taps) in xt.iter().enumerate() {
            let mut acc = [0.0; 3];
            for &(sx, wt) in taps {
                let p = &src[(y * w + sx) * 3..(y * w + sx) * 3 + 3];
                for c in 0..3 {
                    acc[c] += wt * p[c];
                }
            }
            tmp[(y * new_w + x) * 3..(y * new_w + x) * 3 + 3].copy_from_slice(&acc);
        }
    }
    let mut out = vec![0.0; new_h * new_w * 3];
    for (y, taps) in yt.iter().enumerate() {
        for x in 0..new_w {
            let mut acc = [0.0; 3];
            for &(sy, wt) in taps {
                let p = &tmp[(sy * new_w + x) * 3..(sy * new_w + x) * 3 + 3];
                for c in 0..3 {
                    acc[c] += wt * p[c];
                }
            }
            out[(y * new_w + x) * 3..(y * new_w + x) * 3 + 3].copy_from_slice(&acc);
        }
    }
    Ok(ImageBuf::from_raw(new_w, new_h, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODES: [ResampleMode; 4] = [
        ResampleMode::Box,
        ResampleMode::Nearest,
        ResampleMode::Bilinear,
        ResampleMode::Bicubic,
    ];

    fn sample() -> ImageBuf {
        ImageBuf::from_fn(6, 4, |x, y| [x as f64 / 6.0, y as f64 / 4.0, 0.5]).unwrap()
    }

    #[test]
    fn same_size_is_identity() {
        let img = sample();
        for mode in MODES {
            assert_eq!(resample(&img, 6, 4, mode).unwrap(), img);
        }
    }

    #[test]
    fn box_2x2_to_1x1_is_mean() {
        let img = ImageBuf::new(
            2,
            2,
            vec![0.0, 0.2, 1.0, 0.4, 0.2, 1.0, 0.8, 0.2, 0.0, 0.4, 0.2, 0.0],
        )
        .unwrap();
        let out = resample(&img, 1, 1, ResampleMode::Box).unwrap();
        let [r, g, b] = out.pixel(0, 0);
        assert!((r - 0.4).abs() < 1e-12);
        assert!((g - 0.2).abs() < 1e-12);
        assert!((b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn box_fractional_footprint() {
        // 3 -> 2 columns: output 0 covers source [0, 1.5): weights 2/3, 1/3.
        let img = ImageBuf::new(3, 1, vec![0.0, 0.0, 0.0, 0.9, 0.9, 0.9, 0.3, 0.3, 0.3]).unwrap();
        let out = resample(&img, 2, 1, ResampleMode::Box).unwrap();
        assert!((out.pixel(0, 0)[0] - 0.3).abs() < 1e-12);
        assert!((out.pixel(1, 0)[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn nearest_upsample_replicates() {
        let img = ImageBuf::new(1, 1, vec![0.1, 0.6, 0.9]).unwrap();
        let out = resample(&img, 4, 4, ResampleMode::Nearest).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(out.pixel(x, y), [0.1, 0.6, 0.9]);
            }
        }
    }

    #[test]
    fn constant_preserved_by_all_modes() {
        let img = ImageBuf::filled(7, 5, [0.3, 0.6, 0.9]).unwrap();
        for mode in MODES {
            let out = resample(&img, 3, 11, mode).unwrap();
            for (a, b) in out.data().iter().zip([0.3, 0.6, 0.9].iter().cycle()) {
                assert!((a - b).abs() < 1e-9, "{mode:?}");
            }
        }
    }

    #[test]
    fn zero_target_rejected() {
        assert!(resample(&sample(), 0, 2, ResampleMode::Box).is_err());
    }
}

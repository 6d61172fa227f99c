//! Palette reduction to at most `classes` colors.

use crate::image::ImageBuf;

#[inline]
fn luma(px: &[f64]) -> f64 {
    0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]
}

/// Replace every pixel with the mean color of its group.
fn paint_groups(img: &ImageBuf, groups: &[Vec<usize>]) -> ImageBuf {
    let src = img.data();
    let mut out = src.to_vec();
    for g in groups.iter().filter(|g| !g.is_empty()) {
        let mut mean = [0.0; 3];
        for &i in g {
            for c in 0..3 {
                mean[c] += src[i * 3 + c];
            }
        }
        let n = g.len() as f64;
        let mean = mean.map(|v| v / n);
        for &i in g {
            out[i * 3..i * 3 + 3].copy_from_slice(&mean);
        }
    }
    ImageBuf::from_raw(img.width(), img.height(), out)
}

fn pixel_count(img: &ImageBuf) -> usize {
    img.width() * img.height()
}

/// Equal-population luminance bins, each painted with its mean color.
pub(super) fn histogram_equalized(img: &ImageBuf, classes: u32) -> ImageBuf {
    let n = pixel_count(img);
    let c = (classes.max(1) as usize).min(n);
    let data = img.data();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| luma(&data[a * 3..]).total_cmp(&luma(&data[b * 3..])));
    let mut groups = vec![Vec::new(); c];
    for (rank, &i) in order.iter().enumerate() {
        groups[rank * c / n].push(i);
    }
    paint_groups(img, &groups)
}

fn channel_range(data: &[f64], idx: &[usize]) -> (usize, f64) {
    let mut best = (0, 0.0);
    for c in 0..3 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &i in idx {
            let v = data[i * 3 + c];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo > best.1 {
            best = (c, hi - lo);
        }
    }
    best
}

/// Median cut: split the box with the widest channel range at its median
/// until there are `classes` boxes.
pub(super) fn median_cut(img: &ImageBuf, classes: u32) -> ImageBuf {
    let data = img.data();
    let mut boxes: Vec<Vec<usize>> = vec![(0..pixel_count(img)).collect()];
    while boxes.len() < classes.max(1) as usize {
        let pick = boxes
            .iter()
            .enumerate()
            .filter(|(_, b)| b.len() > 1)
            .map(|(k, b)| (k, channel_range(data, b)))
            .filter(|(_, (_, r))| *r > 0.0)
            .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1));
        let Some((k, (channel, _))) = pick else { break };
        let mut b = boxes.swap_remove(k);
        b.sort_by(|&x, &y| data[x * 3 + channel].total_cmp(&data[y * 3 + channel]));
        let upper = b.split_off(b.len() / 2);
        boxes.push(b);
        boxes.push(upper);
    }
    paint_groups(img, &boxes)
}

/// Thresholds on a 256-bin luminance histogram maximizing between-class
/// variance; pixels take their class mean color.
pub(super) fn multi_otsu(img: &ImageBuf, classes: u32) -> ImageBuf {
    const BINS: usize = 256;
    let data = img.data();
    let bin_of = |i: usize| ((luma(&data[i * 3..]) * 255.0).round() as usize).min(BINS - 1);
    let mut hist = [0.0f64; BINS];
    for i in 0..pixel_count(img) {
        hist[bin_of(i)] += 1.0;
    }
    // Prefix sums of weight and first moment.
    let mut w = [0.0; BINS + 1];
    let mut s = [0.0; BINS + 1];
    for b in 0..BINS {
        w[b + 1] = w[b] + hist[b];
        s[b + 1] = s[b] + hist[b] * b as f64;
    }
    let score = |lo: usize, hi: usize| {
        let ww = w[hi] - w[lo];
        if ww > 0.0 {
            let ss = s[hi] - s[lo];
            ss * ss / ww
        } else {
            0.0
        }
    };
    let k = (classes.max(1) as usize).min(BINS);
    // best[j][e]: best score for bins [0, e) split into j classes.
    let mut best = vec![vec![f64::NEG_INFINITY; BINS + 1]; k + 1];
    let mut cut = vec![vec![0usize; BINS + 1]; k + 1];
    best[0][0] = 0.0;
    for j in 1..=k {
        for e in j..=BINS {
            for st in (j - 1)..e {
                if best[j - 1][st] == f64::NEG_INFINITY {
                    continue;
                }
                let v = best[j - 1][st] + score(st, e);
                if v > best[j][e] {
                    best[j][e] = v;
                    cut[j][e] = st;
                }
            }
        }
    }
    let mut class_of_bin = [0usize; BINS];
    let mut e = BINS;
    for j in (1..=k).rev() {
        let st = cut[j][e];
        for c in &mut class_of_bin[st..e] {
            *c = j - 1;
        }
        e = st;
    }
    let mut groups = vec![Vec::new(); k];
    for i in 0..pixel_count(img) {
        groups[class_of_bin[bin_of(i)]].push(i);
    }
    paint_groups(img, &groups)
}

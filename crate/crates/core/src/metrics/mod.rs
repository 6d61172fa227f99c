//! Accuracy, rank/linear correlation, and text-overlap metrics.

mod report;
mod text;

pub use report::{evaluate_run, parse_prediction, Cell, MetricReport, Parsed, Prediction};
pub use text::{bleu, rouge_l, tokenize};

use crate::dataset::{IdLabel, Slot};
use crate::error::{Error, Result};

/// Share of `gt` recovered by `pred`. Repeated predictions count once and
/// only the first `|gt|` distinct predictions are scored.
pub fn identification_accuracy(pred: &[IdLabel], gt: &[IdLabel]) -> Result<f64> {
    let mut gt_set = gt.to_vec();
    gt_set.sort();
    gt_set.dedup();
    if gt_set.is_empty() {
        return Err(Error::InvalidArgument("empty ground-truth label set".into()));
    }
    let mut kept: Vec<IdLabel> = Vec::with_capacity(gt_set.len());
    for p in pred {
        if kept.len() == gt_set.len() {
            break;
        }
        if !kept.contains(p) {
            kept.push(*p);
        }
    }
    let hits = kept.iter().filter(|p| gt_set.contains(p)).count();
    Ok(hits as f64 / gt_set.len() as f64)
}

/// 1 for a match, 0 otherwise. An unparsed prediction scores 0.
pub fn rating_accuracy(pred: Option<Slot>, gt: Slot) -> f64 {
    if pred == Some(gt) {
        1.0
    } else {
        0.0
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value".into()));
    }
    Ok(())
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation of a constant vector".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their ranks.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        let r = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = r;
        }
        start = end;
    }
    ranks
}

/// Pearson linear correlation.
pub fn plcc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(x, y)
}

/// Spearman rank correlation: Pearson over average ranks.
pub fn srcc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distort::SuperCategory;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const BLUR: IdLabel = IdLabel::Distorted(SuperCategory::Blur);
    const DARKEN: IdLabel = IdLabel::Distorted(SuperCategory::Darken);
    const NOISE: IdLabel = IdLabel::Distorted(SuperCategory::Noise);

    #[test]
    fn identification_examples() {
        assert_eq!(identification_accuracy(&[BLUR], &[BLUR, DARKEN]).unwrap(), 0.5);
        assert_eq!(identification_accuracy(&[DARKEN, BLUR], &[BLUR, DARKEN]).unwrap(), 1.0);
        assert_eq!(identification_accuracy(&[NOISE, BLUR, DARKEN], &[BLUR, DARKEN]).unwrap(), 0.5);
        assert_eq!(identification_accuracy(&[BLUR, BLUR, DARKEN], &[BLUR, DARKEN]).unwrap(), 1.0);
        assert_eq!(identification_accuracy(&[], &[IdLabel::Pristine]).unwrap(), 0.0);
        assert!(identification_accuracy(&[BLUR], &[]).is_err());
    }

    #[test]
    fn rating_examples() {
        assert_eq!(rating_accuracy(Some(Slot::A), Slot::A), 1.0);
        assert_eq!(rating_accuracy(Some(Slot::B), Slot::A), 0.0);
        assert_eq!(rating_accuracy(None, Slot::A), 0.0);
        let preds = [Slot::A, Slot::B, Slot::A, Slot::A];
        let gts = [Slot::A, Slot::B, Slot::B, Slot::A];
        let mean: f64 = preds.iter().zip(&gts).map(|(p, g)| rating_accuracy(Some(*p), *g)).sum::<f64>() / 4.0;
        assert_eq!(mean, 0.75);
    }

    #[test]
    fn correlation_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(srcc(&x, &x).unwrap(), 1.0);
        assert!((plcc(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let rev = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(srcc(&x, &rev).unwrap(), -1.0);
        assert!((srcc(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-12);
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn correlation_errors() {
        assert!(matches!(srcc(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]), Err(Error::Undefined(_))));
        assert!(matches!(plcc(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]), Err(Error::Undefined(_))));
        assert!(srcc(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(plcc(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(plcc(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    fn brute_pearson(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|b| b * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    fn brute_ranks(x: &[f64]) -> Vec<f64> {
        x.iter()
            .map(|v| {
                let less = x.iter().filter(|u| *u < v).count() as f64;
                let equal = x.iter().filter(|u| *u == v).count() as f64;
                less + (equal + 1.0) / 2.0
            })
            .collect()
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..1000 {
            let n = rng.random_range(3..40);
            let ties = trial % 2 == 0;
            let draw = |rng: &mut ChaCha8Rng| {
                if ties {
                    rng.random_range(0..5) as f64
                } else {
                    rng.random::<f64>()
                }
            };
            let x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
            let y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
            let (Ok(s), Ok(p)) = (srcc(&x, &y), plcc(&x, &y)) else { continue };
            assert!((p - brute_pearson(&x, &y)).abs() < 1e-12);
            assert!((s - brute_pearson(&brute_ranks(&x), &brute_ranks(&y))).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn srcc_monotone_invariance(x in prop::collection::vec(-100.0f64..100.0, 3..30), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y: Vec<f64> = x.iter().map(|_| rng.random::<f64>()).collect();
            if let Ok(base) = srcc(&x, &y) {
                let tx: Vec<f64> = x.iter().map(|v| (v / 50.0).exp() + 3.0 * v).collect();
                prop_assert!((srcc(&tx, &y).unwrap() - base).abs() < 1e-12);
                let p = plcc(&x, &y).unwrap();
                let ax: Vec<f64> = x.iter().map(|v| 2.5 * v + 7.0).collect();
                prop_assert!((plcc(&ax, &y).unwrap() - p).abs() < 1e-9);
            }
        }

        #[test]
        fn accuracy_bounded_and_order_free(
            pred in prop::collection::vec(0usize..13, 0..5),
            gt in prop::collection::vec(0usize..13, 1..4),
        ) {
            let all = IdLabel::all();
            let pred: Vec<IdLabel> = pred.into_iter().map(|k| all[k]).collect();
            let gt: Vec<IdLabel> = gt.into_iter().map(|k| all[k]).collect();
            let a = identification_accuracy(&pred, &gt).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            let mut rev = gt.clone();
            rev.reverse();
            prop_assert_eq!(a, identification_accuracy(&pred, &rev).unwrap());
        }
    }
}

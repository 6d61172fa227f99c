//! Comparison plans and win-rate quality scores.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum Strategy {
    /// Every unordered pair once.
    RoundRobin,
    /// Each image picks `k` distinct partners.
    RandomK { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    Unweighted,
    ConfidenceWeighted,
}

/// One planned comparison; `i_is_a` says whether `i` is shown as Image A.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedPair {
    pub i: String,
    pub j: String,
    pub i_is_a: bool,
}

impl PlannedPair {
    /// Ids in presentation order `(image_a, image_b)`.
    pub fn presented(&self) -> (&str, &str) {
        if self.i_is_a {
            (&self.i, &self.j)
        } else {
            (&self.j, &self.i)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPlan {
    pub group_id: String,
    pub strategy: Strategy,
    pub pairs: Vec<PlannedPair>,
}

/// Build a plan for one content group. Deterministic in `seed`.
pub fn make_plan(group_id: &str, ids: &[String], strategy: Strategy, seed: u64) -> Result<ComparisonPlan> {
    let n = ids.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "group {group_id:?} has {n} image(s), need at least 2"
        )));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = ids.iter().find(|id| !seen.insert(*id)) {
        return Err(Error::InvalidArgument(format!("duplicate image id {dup:?} in group {group_id:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut index_pairs = Vec::new();
    match strategy {
        Strategy::RoundRobin => {
            for a in 0..n {
                for b in a + 1..n {
                    index_pairs.push((a, b));
                }
            }
        }
        Strategy::RandomK { k } => {
            if k == 0 || k > n - 1 {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} must be in 1..={} for a group of {n}",
                    n - 1
                )));
            }
            for a in 0..n {
                for p in sample(&mut rng, n - 1, k) {
                    let b = if p >= a { p + 1 } else { p };
                    index_pairs.push((a, b));
                }
            }
        }
    }
    let pairs = index_pairs
        .into_iter()
        .map(|(a, b)| PlannedPair {
            i: ids[a].clone(),
            j: ids[b].clone(),
            i_is_a: rng.random_bool(0.5),
        })
        .collect();
    Ok(ComparisonPlan {
        group_id: group_id.to_owned(),
        strategy,
        pairs,
    })
}

/// Unweighted scores are too coarse with one or two comparisons per image:
/// they are rejected for `RandomK` with `k <= 2` and for any plan that
/// leaves an image with two comparisons or fewer.
pub fn validate_weighting(plan: &ComparisonPlan, weighting: Weighting) -> Result<()> {
    if weighting == Weighting::ConfidenceWeighted {
        return Ok(());
    }
    if let Strategy::RandomK { k } = plan.strategy {
        if k <= 2 {
            return Err(Error::InvalidArgument(format!("k = {k} requires confidence weighting")));
        }
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for p in &plan.pairs {
        *counts.entry(&p.i).or_default() += 1;
        *counts.entry(&p.j).or_default() += 1;
    }
    if let Some((id, n)) = counts.iter().filter(|(_, n)| **n <= 2).min_by_key(|(id, _)| **id) {
        return Err(Error::InvalidArgument(format!(
            "group {:?}: image {id:?} has {n} comparison(s); use confidence weighting",
            plan.group_id
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    I,
    J,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub i: String,
    pub j: String,
    pub winner: Winner,
    pub confidence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub score: f64,
    pub comparisons_used: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QualityScoreTable {
    pub scores: BTreeMap<String, Score>,
}

impl QualityScoreTable {
    pub fn get(&self, id: &str) -> Option<f64> {
        self.scores.get(id).map(|s| s.score)
    }

    /// CSV with header `image_id,score,comparisons_used`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["image_id", "score", "comparisons_used"])?;
        for (id, s) in &self.scores {
            out.write_record([id.as_str(), &s.score.to_string(), &s.comparisons_used.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Win rate of every image in `ids` over the outcomes that involve it.
///
/// Unweighted: wins / comparisons. Confidence-weighted: summed confidence
/// of wins over summed confidence, 0.5 when all confidences are zero.
pub fn win_rate_scores(
    ids: &[String],
    outcomes: &[ComparisonOutcome],
    weighting: Weighting,
) -> Result<QualityScoreTable> {
    #[derive(Default)]
    struct Acc {
        n: usize,
        wins: f64,
        total: f64,
    }
    let mut acc: HashMap<&str, Acc> = ids.iter().map(|id| (id.as_str(), Acc::default())).collect();
    for o in outcomes {
        if !(0.0..=1.0).contains(&o.confidence) {
            return Err(Error::InvalidArgument(format!(
                "confidence {} for ({}, {}) is outside [0, 1]",
                o.confidence, o.i, o.j
            )));
        }
        if o.i == o.j {
            return Err(Error::InvalidArgument(format!("self-comparison of {}", o.i)));
        }
        let w = match weighting {
            Weighting::Unweighted => 1.0,
            Weighting::ConfidenceWeighted => o.confidence,
        };
        for (id, won) in [(&o.i, o.winner == Winner::I), (&o.j, o.winner == Winner::J)] {
            let a = acc.get_mut(id.as_str()).ok_or_else(|| {
                Error::InvalidArgument(format!("outcome mentions unknown image {id:?}"))
            })?;
            a.n += 1;
            a.total += w;
            if won {
                a.wins += w;
            }
        }
    }
    let mut scores = BTreeMap::new();
    for id in ids {
        let a = &acc[id.as_str()];
        if a.n == 0 {
            return Err(Error::InvalidArgument(format!("image {id:?} has no comparisons")));
        }
        let score = if a.total > 0.0 { a.wins / a.total } else { 0.5 };
        scores.insert(
            id.clone(),
            Score {
                score,
                comparisons_used: a.n,
            },
        );
    }
    Ok(QualityScoreTable { scores })
}

/// Anything that can judge a planned pair.
pub trait Comparator {
    fn compare(&self, index: usize, pair: &PlannedPair) -> Result<ComparisonOutcome>;
}

/// Confidence distributions for correct and wrong answers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceModel {
    pub correct: (f64, f64),
    pub wrong: (f64, f64),
}

impl Default for ConfidenceModel {
    fn default() -> Self {
        Self {
            correct: (9.0, 1.0),
            wrong: (2.0, 2.0),
        }
    }
}

impl ConfidenceModel {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, correct: bool) -> Result<f64> {
        let (a, b) = if correct { self.correct } else { self.wrong };
        let beta = Beta::new(a, b).map_err(|e| Error::InvalidArgument(format!("Beta({a}, {b}): {e}")))?;
        Ok(beta.sample(rng))
    }
}

/// Noisy oracle: returns the higher-MOS image with probability `1 - eps`.
#[derive(Debug, Clone)]
pub struct SimulatedComparator {
    truth: HashMap<String, f64>,
    eps: f64,
    model: ConfidenceModel,
    seed: u64,
}

impl SimulatedComparator {
    pub fn new(truth: HashMap<String, f64>, eps: f64, model: ConfidenceModel, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&eps) {
            return Err(Error::InvalidArgument(format!("eps must be in [0, 0.5), got {eps}")));
        }
        Ok(Self {
            truth,
            eps,
            model,
            seed,
        })
    }
}

impl Comparator for SimulatedComparator {
    fn compare(&self, index: usize, pair: &PlannedPair) -> Result<ComparisonOutcome> {
        let mos = |id: &str| {
            self.truth
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no MOS for {id:?}")))
        };
        let (mi, mj) = (mos(&pair.i)?, mos(&pair.j)?);
        if mi == mj {
            return Err(Error::InvalidArgument(format!(
                "{} and {} have equal MOS; ties are not representable",
                pair.i, pair.j
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, index as u64));
        let correct = rng.random::<f64>() >= self.eps;
        let truth = if mi > mj { Winner::I } else { Winner::J };
        let winner = match (truth, correct) {
            (w, true) => w,
            (Winner::I, false) => Winner::J,
            (Winner::J, false) => Winner::I,
        };
        Ok(ComparisonOutcome {
            i: pair.i.clone(),
            j: pair.j.clone(),
            winner,
            confidence: self.model.sample(&mut rng, correct)?,
        })
    }
}

/// Run every pair of `plan` through `comparator`.
pub fn run_plan(plan: &ComparisonPlan, comparator: &dyn Comparator) -> Result<Vec<ComparisonOutcome>> {
    plan.pairs
        .iter()
        .enumerate()
        .map(|(k, p)| comparator.compare(k, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::srcc;
    use proptest::prelude::*;
    use super::Strategy;
    use std::collections::HashSet;

    fn ids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("img{i:03}")).collect()
    }

    fn outcome(i: &str, j: &str, winner: Winner, confidence: f64) -> ComparisonOutcome {
        ComparisonOutcome {
            i: i.into(),
            j: j.into(),
            winner,
            confidence,
        }
    }

    fn unordered(plan: &ComparisonPlan) -> HashSet<(String, String)> {
        plan.pairs
            .iter()
            .map(|p| {
                if p.i < p.j {
                    (p.i.clone(), p.j.clone())
                } else {
                    (p.j.clone(), p.i.clone())
                }
            })
            .collect()
    }

    #[test]
    fn plan_sizes() {
        let rr = make_plan("g", &ids(4), Strategy::RoundRobin, 0).unwrap();
        assert_eq!(rr.pairs.len(), 6);
        let full = make_plan("g", &ids(16), Strategy::RoundRobin, 1).unwrap();
        let k15 = make_plan("g", &ids(16), Strategy::RandomK { k: 15 }, 1).unwrap();
        assert_eq!(unordered(&full), unordered(&k15));
        let big = make_plan("g", &ids(100), Strategy::RandomK { k: 25 }, 2).unwrap();
        for id in ids(100) {
            let own: Vec<_> = big.pairs.iter().filter(|p| p.i == id).collect();
            assert_eq!(own.len(), 25);
            assert_eq!(own.iter().map(|p| &p.j).collect::<HashSet<_>>().len(), 25);
            assert!(own.iter().all(|p| p.j != id));
        }
    }

    #[test]
    fn plan_errors() {
        assert!(make_plan("g", &ids(1), Strategy::RoundRobin, 0).is_err());
        assert!(make_plan("g", &ids(5), Strategy::RandomK { k: 5 }, 0).is_err());
        assert!(make_plan("g", &ids(5), Strategy::RandomK { k: 0 }, 0).is_err());
        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(make_plan("g", &dup, Strategy::RoundRobin, 0).is_err());
    }

    #[test]
    fn presentation_order_varies() {
        let plan = make_plan("g", &ids(20), Strategy::RoundRobin, 3).unwrap();
        let firsts = plan.pairs.iter().filter(|p| p.i_is_a).count();
        assert!(firsts > 40 && firsts < 150, "{firsts}");
        assert_eq!(plan, make_plan("g", &ids(20), Strategy::RoundRobin, 3).unwrap());
    }

    #[test]
    fn weighting_rules() {
        let plan = |n, strategy| make_plan("g", &ids(n), strategy, 0).unwrap();
        let (u, c) = (Weighting::Unweighted, Weighting::ConfidenceWeighted);
        assert!(validate_weighting(&plan(50, Strategy::RandomK { k: 1 }), u).is_err());
        assert!(validate_weighting(&plan(50, Strategy::RandomK { k: 2 }), u).is_err());
        assert!(validate_weighting(&plan(50, Strategy::RandomK { k: 1 }), c).is_ok());
        assert!(validate_weighting(&plan(50, Strategy::RandomK { k: 3 }), u).is_ok());
        assert!(validate_weighting(&plan(4, Strategy::RoundRobin), u).is_ok());
        assert!(validate_weighting(&plan(3, Strategy::RoundRobin), u).is_err());
        assert!(validate_weighting(&plan(3, Strategy::RoundRobin), c).is_ok());
    }

    #[test]
    fn score_examples() {
        let ids: Vec<String> = ["x", "a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let outs = vec![
            outcome("x", "a", Winner::I, 1.0),
            outcome("b", "x", Winner::J, 1.0),
            outcome("x", "c", Winner::I, 1.0),
            outcome("d", "x", Winner::I, 1.0),
        ];
        let t = win_rate_scores(&ids, &outs, Weighting::Unweighted).unwrap();
        assert_eq!(t.get("x"), Some(0.75));
        assert_eq!(t.scores["x"].comparisons_used, 4);

        let ids2: Vec<String> = ["x", "a", "b"].iter().map(|s| s.to_string()).collect();
        let outs = vec![outcome("x", "a", Winner::I, 0.9), outcome("x", "b", Winner::J, 0.1)];
        let t = win_rate_scores(&ids2, &outs, Weighting::ConfidenceWeighted).unwrap();
        assert!((t.get("x").unwrap() - 0.9).abs() < 1e-12);

        let zero = vec![outcome("x", "a", Winner::I, 0.0), outcome("x", "b", Winner::I, 0.0)];
        let t = win_rate_scores(&ids2, &zero, Weighting::ConfidenceWeighted).unwrap();
        assert_eq!(t.get("x"), Some(0.5));
    }

    #[test]
    fn score_errors() {
        let ids: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let outs = vec![outcome("x", "y", Winner::I, 0.5)];
        assert!(win_rate_scores(&ids, &outs, Weighting::Unweighted).is_err());
        let outs = vec![outcome("x", "q", Winner::I, 0.5)];
        assert!(win_rate_scores(&ids[..1], &outs, Weighting::Unweighted).is_err());
        let outs = vec![outcome("x", "y", Winner::I, 1.5)];
        assert!(win_rate_scores(&ids[..2], &outs, Weighting::Unweighted).is_err());
    }

    fn truth(n: usize) -> HashMap<String, f64> {
        ids(n).into_iter().enumerate().map(|(k, id)| (id, k as f64 * 0.37 + 1.0)).collect()
    }

    #[test]
    fn perfect_comparator_gives_evenly_spaced_scores() {
        let n = 9;
        let ids = ids(n);
        let cmp = SimulatedComparator::new(truth(n), 0.0, ConfidenceModel::default(), 4).unwrap();
        let plan = make_plan("g", &ids, Strategy::RoundRobin, 4).unwrap();
        let t = win_rate_scores(&ids, &run_plan(&plan, &cmp).unwrap(), Weighting::Unweighted).unwrap();
        for (rank, id) in ids.iter().enumerate() {
            assert!((t.get(id).unwrap() - rank as f64 / (n - 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn comparator_rejects_bad_eps_and_ties() {
        assert!(SimulatedComparator::new(truth(3), 0.5, ConfidenceModel::default(), 0).is_err());
        assert!(SimulatedComparator::new(truth(3), -0.1, ConfidenceModel::default(), 0).is_err());
        let mut t = truth(2);
        t.insert("img001".into(), t["img000"]);
        let cmp = SimulatedComparator::new(t, 0.1, ConfidenceModel::default(), 0).unwrap();
        let plan = make_plan("g", &ids(2), Strategy::RoundRobin, 0).unwrap();
        assert!(run_plan(&plan, &cmp).is_err());
    }

    #[test]
    fn noisy_round_robin_tracks_truth() {
        let n = 16;
        let ids = ids(n);
        let mos: Vec<f64> = ids.iter().map(|id| truth(n)[id]).collect();
        let mut total = 0.0;
        for seed in 0..100 {
            let cmp = SimulatedComparator::new(truth(n), 0.1, ConfidenceModel::default(), seed).unwrap();
            let plan = make_plan("g", &ids, Strategy::RoundRobin, seed).unwrap();
            let t = win_rate_scores(&ids, &run_plan(&plan, &cmp).unwrap(), Weighting::Unweighted).unwrap();
            let s: Vec<f64> = ids.iter().map(|id| t.get(id).unwrap()).collect();
            total += srcc(&s, &mos).unwrap();
        }
        assert!(total / 100.0 > 0.9, "{}", total / 100.0);
    }

    #[test]
    fn csv_layout() {
        let ids: Vec<String> = vec!["a".into(), "b".into()];
        let t = win_rate_scores(&ids, &[outcome("a", "b", Winner::J, 0.8)], Weighting::Unweighted).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "image_id,score,comparisons_used\na,0,1\nb,1,1\n");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn order_and_slot_invariance(seed in any::<u64>(), n in 2usize..10, rot in 0usize..50) {
            let ids = ids(n);
            let cmp = SimulatedComparator::new(truth(n), 0.3, ConfidenceModel::default(), seed).unwrap();
            let plan = make_plan("g", &ids, Strategy::RoundRobin, seed).unwrap();
            let outs = run_plan(&plan, &cmp).unwrap();
            for w in [Weighting::Unweighted, Weighting::ConfidenceWeighted] {
                let base = win_rate_scores(&ids, &outs, w).unwrap();
                let mut rotated = outs.clone();
                let len = rotated.len();
                rotated.rotate_left(rot % len);
                let swapped: Vec<_> = outs.iter().map(|o| ComparisonOutcome {
                    i: o.j.clone(),
                    j: o.i.clone(),
                    winner: if o.winner == Winner::I { Winner::J } else { Winner::I },
                    confidence: o.confidence,
                }).collect();
                for other in [rotated, swapped] {
                    let t = win_rate_scores(&ids, &other, w).unwrap();
                    for id in &ids {
                        prop_assert!((t.get(id).unwrap() - base.get(id).unwrap()).abs() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn equal_confidence_matches_unweighted(seed in any::<u64>(), c in 0.01f64..=1.0) {
            let n = 6;
            let ids = ids(n);
            let cmp = SimulatedComparator::new(truth(n), 0.3, ConfidenceModel::default(), seed).unwrap();
            let plan = make_plan("g", &ids, Strategy::RoundRobin, seed).unwrap();
            let outs: Vec<_> = run_plan(&plan, &cmp).unwrap().into_iter()
                .map(|mut o| { o.confidence = c; o }).collect();
            let u = win_rate_scores(&ids, &outs, Weighting::Unweighted).unwrap();
            let w = win_rate_scores(&ids, &outs, Weighting::ConfidenceWeighted).unwrap();
            for id in &ids {
                prop_assert!((u.get(id).unwrap() - w.get(id).unwrap()).abs() < 1e-12);
            }
        }
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Lowercase tokens split on anything that is not alphanumeric.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    for g in tokens.windows(n) {
        *counts.entry(g).or_insert(0) += 1;
    }
    counts
}

fn reference_tokens(reference: &str) -> Result<Vec<String>> {
    let r = tokenize(reference);
    if r.is_empty() {
        return Err(Error::InvalidArgument("empty reference text".into()));
    }
    Ok(r)
}

/// Sentence BLEU-4 with uniform weights. Unigram precision is unsmoothed;
/// orders 2 to 4 use add-one smoothing.
pub fn bleu(candidate: &str, reference: &str) -> Result<f64> {
    let r = reference_tokens(reference)?;
    let c = tokenize(candidate);
    if c.is_empty() {
        return Ok(0.0);
    }
    let mut log_sum = 0.0;
    for n in 1..=4 {
        let cand = ngram_counts(&c, n);
        let refs = ngram_counts(&r, n);
        let total: usize = cand.values().sum();
        let matched: usize = cand
            .iter()
            .map(|(g, k)| (*k).min(refs.get(g).copied().unwrap_or(0)))
            .sum();
        let p = if n == 1 {
            matched as f64 / total as f64
        } else {
            (matched + 1) as f64 / (total + 1) as f64
        };
        if p == 0.0 {
            return Ok(0.0);
        }
        log_sum += p.ln() / 4.0;
    }
    let (lc, lr) = (c.len() as f64, r.len() as f64);
    let bp = if lc > lr { 1.0 } else { (1.0 - lr / lc).exp() };
    Ok(bp * log_sum.exp())
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-L F1 over longest common subsequence.
pub fn rouge_l(candidate: &str, reference: &str) -> Result<f64> {
    let r = reference_tokens(reference)?;
    let c = tokenize(candidate);
    if c.is_empty() {
        return Ok(0.0);
    }
    let l = lcs_len(&c, &r) as f64;
    if l == 0.0 {
        return Ok(0.0);
    }
    let (p, rec) = (l / c.len() as f64, l / r.len() as f64);
    Ok(2.0 * p * rec / (p + rec))
}

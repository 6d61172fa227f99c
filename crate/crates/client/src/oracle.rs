use std::collections::HashMap;

use iqakit_core::dataset::{format_labels, IdLabel, SampleRecord, Slot};
use iqakit_core::rng::{derive_seed, hash_str};
use iqakit_core::scoring::ConfidenceModel;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ClientError, Result};
use crate::http::Backend;
use crate::types::{InferenceRequest, InferenceResponse};

/// The correct brief answer for one sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldAnswer {
    Labels(Vec<IdLabel>),
    Winner(Slot),
}

#[derive(Debug, Clone, Default)]
pub struct GroundTruthStore {
    answers: HashMap<String, GoldAnswer>,
}

impl GroundTruthStore {
    /// Gold answers of every identification and rating record.
    pub fn from_records(records: &[SampleRecord]) -> Self {
        let mut store = Self::default();
        for r in records {
            if let Some(labels) = r.gold_labels() {
                store.insert(&r.id, GoldAnswer::Labels(labels));
            } else if let Some(w) = r.gold_winner() {
                store.insert(&r.id, GoldAnswer::Winner(w));
            }
        }
        store
    }

    pub fn insert(&mut self, id: &str, answer: GoldAnswer) {
        self.answers.insert(id.to_owned(), answer);
    }

    pub fn get(&self, id: &str) -> Option<&GoldAnswer> {
        self.answers.get(id)
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

/// Split text into word pieces, attaching leading spaces to the next piece.
fn pieces(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut prev_word = false;
    for c in text.chars() {
        let word = c.is_alphanumeric();
        let boundary = !cur.trim().is_empty() && (!word || !prev_word);
        if boundary {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
        prev_word = word;
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Answer from ground truth: correct with probability `1 - eps`, otherwise
/// a wrong legal answer. Confidence follows `model`; every emitted token
/// carries its log.
pub fn oracle_answer(
    request: &InferenceRequest,
    store: &GroundTruthStore,
    eps: f64,
    seed: u64,
    model: &ConfidenceModel,
) -> Result<InferenceResponse> {
    if !(0.0..0.5).contains(&eps) {
        return Err(ClientError::InvalidRequest(format!("eps must be in [0, 0.5), got {eps}")));
    }
    let id = request
        .id
        .as_deref()
        .ok_or_else(|| ClientError::InvalidRequest("oracle requests need a sample id".into()))?;
    let gold = store.get(id).ok_or_else(|| ClientError::UnknownSample(id.to_owned()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, hash_str(id)));
    let correct = rng.random::<f64>() >= eps;
    let text = match (gold, correct) {
        (GoldAnswer::Labels(l), true) => format_labels(l),
        (GoldAnswer::Labels(l), false) => {
            let wrong: Vec<IdLabel> = IdLabel::all().into_iter().filter(|c| !l.contains(c)).collect();
            wrong.choose(&mut rng).expect("13 labels exceed any gold set").to_string()
        }
        (GoldAnswer::Winner(w), true) => w.label().to_owned(),
        (GoldAnswer::Winner(w), false) => w.other().label().to_owned(),
    };
    let confidence = model.sample(&mut rng, correct)?.clamp(1e-6, 1.0);
    let token_logprobs = request
        .want_logprobs
        .then(|| pieces(&text).into_iter().map(|p| (p, confidence.ln())).collect());
    Ok(InferenceResponse { text, token_logprobs })
}

/// [`oracle_answer`] with the default confidence model.
pub fn oracle_infer(
    request: &InferenceRequest,
    store: &GroundTruthStore,
    eps: f64,
    seed: u64,
) -> Result<InferenceResponse> {
    oracle_answer(request, store, eps, seed, &ConfidenceModel::default())
}

/// Offline stand-in for a model endpoint.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub store: GroundTruthStore,
    pub eps: f64,
    pub seed: u64,
    pub model: ConfidenceModel,
}

impl Oracle {
    pub fn new(store: GroundTruthStore, eps: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&eps) {
            return Err(ClientError::InvalidRequest(format!("eps must be in [0, 0.5), got {eps}")));
        }
        Ok(Self {
            store,
            eps,
            seed,
            model: ConfidenceModel::default(),
        })
    }
}

impl Backend for Oracle {
    fn infer(&self, request: &InferenceRequest) -> Result<InferenceResponse> {
        oracle_answer(request, &self.store, self.eps, self.seed, &self.model)
    }
}

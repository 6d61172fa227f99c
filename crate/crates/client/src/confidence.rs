use iqakit_core::dataset::{IdLabel, Slot, Task};
use iqakit_core::distort::key_phrases;

use crate::error::{ClientError, Result};
use crate::types::InferenceResponse;

/// Chooses the key strings whose tokens carry the answer's confidence.
pub trait KeyTokenSelector {
    fn select(&self, response: &InferenceResponse) -> Vec<String>;
}

/// Fixed key strings for the brief tasks: distortion names for
/// identification, the image slots for rating. Reasoning tasks get none.
#[derive(Debug, Clone, Copy)]
pub struct BriefKeyTokens(pub Task);

impl KeyTokenSelector for BriefKeyTokens {
    fn select(&self, _response: &InferenceResponse) -> Vec<String> {
        match self.0 {
            Task::DistortionIdentification => {
                let mut keys: Vec<String> = key_phrases().into_iter().map(str::to_owned).collect();
                keys.extend(IdLabel::all().iter().map(ToString::to_string));
                keys.sort();
                keys.dedup();
                keys
            }
            Task::InstantRating => vec![Slot::A.label().to_owned(), Slot::B.label().to_owned()],
            Task::AssessmentReasoningPrompt | Task::ComparisonReasoningPrompt => Vec::new(),
        }
    }
}

fn is_word(c: u8) -> bool {
    c.is_ascii_alphanumeric()
}

/// Byte ranges of whole-word, case-insensitive matches of `key` in `text`.
fn find_all(text: &[u8], key: &[u8]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if key.is_empty() || key.len() > text.len() {
        return out;
    }
    for start in 0..=text.len() - key.len() {
        let end = start + key.len();
        if !text[start..end].eq_ignore_ascii_case(key) {
            continue;
        }
        let left_ok = start == 0 || !is_word(text[start - 1]) || !is_word(key[0]);
        let right_ok = end == text.len() || !is_word(text[end]) || !is_word(key[key.len() - 1]);
        if left_ok && right_ok {
            out.push((start, end));
        }
    }
    out
}

/// Mean token probability over every token overlapping a key-string match.
///
/// `Ok(None)` means no key string occurs in the token stream.
pub fn extract_confidence(response: &InferenceResponse, keys: &[String]) -> Result<Option<f64>> {
    let tokens = response.token_logprobs.as_ref().ok_or(ClientError::MissingLogprobs)?;
    let mut text = String::new();
    let mut spans = Vec::with_capacity(tokens.len());
    for (tok, lp) in tokens {
        if lp.is_nan() || *lp > 0.0 {
            return Err(ClientError::MalformedBody(format!("log-probability {lp} for token {tok:?}")));
        }
        let start = text.len();
        text.push_str(tok);
        spans.push((start, text.len()));
    }
    let bytes = text.as_bytes();
    let mut hit = vec![false; tokens.len()];
    for key in keys {
        for (ms, me) in find_all(bytes, key.as_bytes()) {
            for (k, &(ts, te)) in spans.iter().enumerate() {
                if ts < me && ms < te {
                    hit[k] = true;
                }
            }
        }
    }
    let probs: Vec<f64> = tokens
        .iter()
        .zip(&hit)
        .filter(|(_, h)| **h)
        .map(|((_, lp), _)| lp.exp())
        .collect();
    if probs.is_empty() {
        return Ok(None);
    }
    Ok(Some(probs.iter().sum::<f64>() / probs.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resp(tokens: &[(&str, f64)]) -> InferenceResponse {
        InferenceResponse {
            text: tokens.iter().map(|t| t.0).collect(),
            token_logprobs: Some(tokens.iter().map(|(t, l)| (t.to_string(), *l)).collect()),
        }
    }

    fn keys(k: &[&str]) -> Vec<String> {
        k.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn averages_key_tokens() {
        let r = resp(&[("blur", 0.0)]);
        assert_eq!(extract_confidence(&r, &keys(&["blur"])).unwrap(), Some(1.0));
        let r = resp(&[("The", -3.0), (" image", -2.0), (" A", 0.6f64.ln()), (" wins", -1.0)]);
        let c = extract_confidence(&r, &keys(&["image a"])).unwrap().unwrap();
        assert!((c - (0.6 + (-2.0f64).exp()) / 2.0).abs() < 1e-15);
        let r = resp(&[("noise", 0.8f64.ln()), (",", -0.01), (" blur", 0.6f64.ln())]);
        let c = extract_confidence(&r, &keys(&["noise", "blur"])).unwrap().unwrap();
        assert!((c - 0.7).abs() < 1e-15);
    }

    #[test]
    fn multi_token_key_uses_all_pieces() {
        let r = resp(&[("jp", 0.5f64.ln()), ("eg", 0.9f64.ln()), (" is", -5.0)]);
        let c = extract_confidence(&r, &keys(&["jpeg"])).unwrap().unwrap();
        assert!((c - 0.7).abs() < 1e-15);
    }

    #[test]
    fn word_boundaries() {
        let r = resp(&[("blurry", 0.0)]);
        assert_eq!(extract_confidence(&r, &keys(&["blur"])).unwrap(), None);
        let r = resp(&[("Imagine", -1.0), (" Alpha", -1.0)]);
        assert_eq!(extract_confidence(&r, &keys(&["image a"])).unwrap(), None);
    }

    #[test]
    fn unavailable_and_missing() {
        let r = resp(&[("I", -0.1), (" don't", -0.2), (" know", -0.3)]);
        let k = BriefKeyTokens(Task::DistortionIdentification).select(&r);
        assert_eq!(extract_confidence(&r, &k).unwrap(), None);
        let bare = InferenceResponse {
            text: "blur".into(),
            token_logprobs: None,
        };
        assert!(matches!(extract_confidence(&bare, &k), Err(ClientError::MissingLogprobs)));
        let bad = resp(&[("blur", 0.5)]);
        assert!(extract_confidence(&bad, &k).is_err());
    }

    #[test]
    fn brief_keys() {
        let r = resp(&[]);
        let rating = BriefKeyTokens(Task::InstantRating).select(&r);
        assert_eq!(rating, keys(&["Image A", "Image B"]));
        let ident = BriefKeyTokens(Task::DistortionIdentification).select(&r);
        assert!(ident.iter().any(|k| k == "none"));
        assert!(ident.iter().any(|k| k == "blur"));
        assert!(BriefKeyTokens(Task::ComparisonReasoningPrompt).select(&r).is_empty());
    }
}

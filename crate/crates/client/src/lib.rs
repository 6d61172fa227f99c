//! Client side of model inference: an HTTP endpoint client, a ground-truth
//! oracle with the same interface, and confidence extraction from token
//! log-probabilities.

mod confidence;
mod error;
mod http;
mod oracle;
mod types;

pub use confidence::{extract_confidence, BriefKeyTokens, KeyTokenSelector};
pub use error::{ClientError, Result};
pub use http::{infer_all, Backend, EndpointConfig, HttpClient};
pub use oracle::{oracle_answer, oracle_infer, GoldAnswer, GroundTruthStore, Oracle};
pub use types::{InferenceRequest, InferenceResponse};

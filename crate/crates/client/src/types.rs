use serde::{Deserialize, Serialize};

use crate::error::{ClientError, Result};

/// Wire request. `id` names the sample for logging and the oracle; it is
/// not sent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceRequest {
    pub question: String,
    /// File paths or base64 payloads, reference first when present.
    pub images: Vec<String>,
    pub want_logprobs: bool,
    #[serde(skip)]
    pub id: Option<String>,
}

impl InferenceRequest {
    pub fn new(id: impl Into<String>, question: impl Into<String>, images: Vec<String>) -> Self {
        Self {
            question: question.into(),
            images,
            want_logprobs: true,
            id: Some(id.into()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.images.len()) {
            return Err(ClientError::InvalidRequest(format!(
                "{} image(s); expected 1 to 3",
                self.images.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceResponse {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub token_logprobs: Option<Vec<(String, f64)>>,
}

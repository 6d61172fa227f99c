use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use ureq::Agent;

use crate::error::{ClientError, Result};
use crate::types::{InferenceRequest, InferenceResponse};

/// Anything that answers inference requests.
pub trait Backend: Sync {
    fn infer(&self, request: &InferenceRequest) -> Result<InferenceResponse>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    /// Full URL that accepts the JSON POST.
    pub url: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    /// Delay before the first retry; doubles on each further retry.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
    /// Environment variable holding a bearer token.
    #[serde(default)]
    pub token_env: Option<String>,
}

fn default_timeout() -> f64 {
    60.0
}

fn default_retries() -> u32 {
    3
}

fn default_backoff() -> u64 {
    500
}

impl EndpointConfig {
    pub fn new(url: impl Into<String>) -> Self {
        Self {
            url: url.into(),
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            backoff_ms: default_backoff(),
            token_env: None,
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_secs.is_finite() && self.timeout_secs > 0.0) {
            return Err(ClientError::Config(format!(
                "timeout must be positive, got {}",
                self.timeout_secs
            )));
        }
        if !(self.url.starts_with("http://") || self.url.starts_with("https://")) {
            return Err(ClientError::Config(format!("url {:?} is not http(s)", self.url)));
        }
        Ok(())
    }
}

/// Blocking JSON client with retry on transient failures.
pub struct HttpClient {
    config: EndpointConfig,
    agent: Agent,
    token: Option<String>,
}

impl HttpClient {
    pub fn new(config: EndpointConfig) -> Result<Self> {
        config.validate()?;
        let token = match &config.token_env {
            Some(var) => Some(std::env::var(var).map_err(|_| ClientError::MissingToken(var.clone()))?),
            None => None,
        };
        let agent: Agent = Agent::config_builder()
            .timeout_global(Some(config.timeout()))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(Self { config, agent, token })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.config
    }

    fn map_err(&self, e: ureq::Error) -> ClientError {
        match e {
            ureq::Error::Timeout(_) => ClientError::Timeout(self.config.timeout()),
            ureq::Error::Io(io) if io.kind() == std::io::ErrorKind::TimedOut => {
                ClientError::Timeout(self.config.timeout())
            }
            ureq::Error::Io(io) => ClientError::Connection(io.to_string()),
            ureq::Error::ConnectionFailed | ureq::Error::HostNotFound => ClientError::Connection(e.to_string()),
            ureq::Error::Json(j) => ClientError::MalformedBody(j.to_string()),
            ureq::Error::BadUri(u) => ClientError::Config(format!("bad url {u}")),
            other => ClientError::Transport(other.to_string()),
        }
    }

    fn attempt(&self, request: &InferenceRequest) -> Result<InferenceResponse> {
        let body = serde_json::to_vec(request).map_err(|e| ClientError::InvalidRequest(e.to_string()))?;
        let mut req = self.agent.post(&self.config.url).header("Content-Type", "application/json");
        if let Some(token) = &self.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = req.send(&body[..]).map_err(|e| self.map_err(e))?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| self.map_err(e))?;
        if !(200..300).contains(&status) {
            return Err(ClientError::Status { status, body });
        }
        let mut parsed: InferenceResponse =
            serde_json::from_str(&body).map_err(|e| ClientError::MalformedBody(e.to_string()))?;
        if !request.want_logprobs {
            parsed.token_logprobs = None;
        }
        Ok(parsed)
    }
}

impl Backend for HttpClient {
    fn infer(&self, request: &InferenceRequest) -> Result<InferenceResponse> {
        request.validate()?;
        let mut attempt = 0;
        loop {
            match self.attempt(request) {
                Err(e) if e.is_transient() && attempt < self.config.max_retries => {
                    let wait = self.config.backoff_ms.saturating_mul(1 << attempt.min(20));
                    thread::sleep(Duration::from_millis(wait));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

/// Run `requests` with at most `concurrency` in flight. Results keep the
/// request order.
pub fn infer_all<B: Backend + ?Sized>(
    backend: &B,
    requests: &[InferenceRequest],
    concurrency: usize,
) -> Vec<Result<InferenceResponse>> {
    let slots: Mutex<Vec<Option<Result<InferenceResponse>>>> =
        Mutex::new((0..requests.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = concurrency.max(1).min(requests.len().max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= requests.len() {
                    break;
                }
                let r = backend.infer(&requests[k]);
                slots.lock().unwrap()[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every request is answered"))
        .collect()
}

//! Blocking chat-completion client with retry and backoff.

use std::time::{Duration, Instant};

use chrono::Utc;
use reqwest::blocking::Client;
use reqwest::StatusCode;
use wepbench_core::domain::{ExchangeStatus, PromptRecord};

use crate::backend::{Exchange, Respondent};
use crate::wire::{extract_content, ChatRequest};
use crate::{BackendConfig, GatewayError, Result};

#[derive(Debug)]
pub struct HttpBackend {
    config: BackendConfig,
    api_key: Option<String>,
    client: Client,
}

impl HttpBackend {
    /// Reads the API key from the configured environment variable. A named
    /// variable that is unset is an error; `api_key_env: None` sends no
    /// Authorization header.
    pub fn new(config: BackendConfig) -> Result<Self> {
        config.validate()?;
        let api_key = match &config.api_key_env {
            Some(var) => match std::env::var(var) {
                Ok(v) if !v.is_empty() => Some(v),
                _ => return Err(GatewayError::MissingApiKey(var.clone())),
            },
            None => None,
        };
        let client = Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| GatewayError::Config(format!("cannot build HTTP client: {e}")))?;
        Ok(HttpBackend { config, api_key, client })
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    fn backoff(&self, attempt: u32) -> Duration {
        self.config.retry_base.saturating_mul(1u32 << attempt.min(16))
    }
}

fn retryable(status: StatusCode) -> bool {
    status == StatusCode::TOO_MANY_REQUESTS || status.is_server_error()
}

impl Respondent for HttpBackend {
    fn name(&self) -> &str {
        &self.config.name
    }

    fn model(&self) -> &str {
        &self.config.model
    }

    fn temperature(&self) -> f64 {
        self.config.temperature
    }

    fn respond(&self, prompt: &PromptRecord) -> Exchange {
        let request = ChatRequest::user(&self.config.model, &prompt.body, self.config.temperature);
        let request_json = serde_json::to_string(&request).expect("request serializes");
        let started = Instant::now();
        let mut attempts = 0;
        let mut last_status: Option<u16>;
        let mut last_error: Option<String>;

        loop {
            attempts += 1;
            let mut builder = self.client.post(&self.config.endpoint).json(&request);
            if let Some(key) = &self.api_key {
                builder = builder.bearer_auth(key);
            }
            let outcome = builder.send().and_then(|r| {
                let status = r.status();
                r.text().map(|body| (status, body))
            });
            let retry = match outcome {
                Ok((status, body)) if status.is_success() => {
                    let (raw, status_kind, error) = match extract_content(&body) {
                        Some(content) => (content, ExchangeStatus::Ok, None),
                        None => (body, ExchangeStatus::Malformed, Some("reply has no message content".to_string())),
                    };
                    return Exchange {
                        request: request_json,
                        raw,
                        status: status_kind,
                        attempts,
                        elapsed_ms: started.elapsed().as_millis() as u64,
                        http_status: Some(status.as_u16()),
                        error,
                        timestamp: Some(Utc::now().to_rfc3339()),
                    };
                }
                Ok((status, body)) => {
                    last_status = Some(status.as_u16());
                    last_error = Some(format!("HTTP {status}: {}", body.chars().take(200).collect::<String>()));
                    retryable(status)
                }
                Err(e) => {
                    last_status = e.status().map(|s| s.as_u16());
                    last_error = Some(e.to_string());
                    true
                }
            };
            if !retry || attempts > self.config.max_retries {
                break;
            }
            std::thread::sleep(self.backoff(attempts - 1));
        }

        Exchange {
            request: request_json,
            raw: String::new(),
            status: ExchangeStatus::TransportFailure,
            attempts,
            elapsed_ms: started.elapsed().as_millis() as u64,
            http_status: last_status,
            error: last_error,
            timestamp: Some(Utc::now().to_rfc3339()),
        }
    }
}

use wepbench_core::domain::{ExchangeStatus, PromptRecord};

/// One request/reply round trip, before any parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct Exchange {
    pub request: String,
    pub raw: String,
    pub status: ExchangeStatus,
    pub attempts: u32,
    pub elapsed_ms: u64,
    pub http_status: Option<u16>,
    pub error: Option<String>,
    pub timestamp: Option<String>,
}

/// Anything that can answer a prompt: the HTTP client or a mock.
pub trait Respondent: Send + Sync {
    /// Backend name recorded on responses and used in the cache key.
    fn name(&self) -> &str;
    fn model(&self) -> &str;
    fn temperature(&self) -> f64 {
        0.0
    }
    fn respond(&self, prompt: &PromptRecord) -> Exchange;
}

//! Sends prompts to a chat-completion backend or a deterministic mock,
//! caching replies and writing a transcript of every exchange.

mod backend;
mod cache;
mod config;
mod error;
mod gateway;
mod http;
pub mod mock;
mod transcript;
pub mod wire;

pub use backend::{Exchange, Respondent};
pub use cache::{cache_key, Cache, CacheEntry};
pub use config::{BackendConfig, MockKind, MockSpec};
pub use error::{GatewayError, Result};
pub use gateway::{BatchOutput, BatchSummary, Gateway};
pub use http::HttpBackend;
pub use mock::MockRespondent;
pub use transcript::{Transcript, TranscriptEntry};

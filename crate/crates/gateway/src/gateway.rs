//! Runs a corpus through a respondent with caching and transcripts.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use wepbench_core::domain::{ExchangeStatus, Parsed, PromptRecord, ResponseRecord};
use wepbench_core::parser::parse_response;

use crate::backend::Respondent;
use crate::cache::{cache_key, Cache, CacheEntry};
use crate::transcript::{Transcript, TranscriptEntry};
use crate::Result;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BatchSummary {
    pub total: usize,
    /// Exchanges that ended malformed or without a reply.
    pub failures: usize,
    /// Replies that arrived but could not be parsed.
    pub parse_failures: usize,
    pub requests_issued: usize,
    pub cache_hits: usize,
}

#[derive(Debug, Clone)]
pub struct BatchOutput {
    /// In corpus order.
    pub responses: Vec<ResponseRecord>,
    pub summary: BatchSummary,
}

pub struct Gateway {
    respondent: Box<dyn Respondent>,
    cache: Option<Cache>,
    transcript: Option<Transcript>,
    parallelism: usize,
}

impl Gateway {
    pub fn new(respondent: Box<dyn Respondent>) -> Self {
        Gateway {
            respondent,
            cache: None,
            transcript: None,
            parallelism: 1,
        }
    }

    pub fn with_cache(mut self, cache: Cache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_transcript(mut self, transcript: Transcript) -> Self {
        self.transcript = Some(transcript);
        self
    }

    pub fn with_parallelism(mut self, n: usize) -> Self {
        self.parallelism = n.max(1);
        self
    }

    pub fn respondent(&self) -> &dyn Respondent {
        self.respondent.as_ref()
    }

    /// Answers one prompt. The flag is true when a request was issued, false
    /// on a cache hit.
    pub fn complete(&self, prompt: &PromptRecord) -> Result<(ResponseRecord, bool)> {
        let r = self.respondent.as_ref();
        let key = cache_key(r.name(), r.model(), r.temperature(), &prompt.body);
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok((
                ResponseRecord {
                    prompt_id: prompt.id.clone(),
                    parsed: parse_response(&hit.raw, prompt),
                    raw: hit.raw,
                    backend: hit.backend,
                    model: hit.model,
                    status: hit.status,
                    timestamp: hit.timestamp,
                },
                false,
            ));
        }

        let exchange = r.respond(prompt);
        if let Some(t) = &self.transcript {
            t.record(&TranscriptEntry {
                prompt_id: prompt.id.clone(),
                backend: r.name().to_string(),
                model: r.model().to_string(),
                request: exchange.request.clone(),
                raw: exchange.raw.clone(),
                status: exchange.status,
                attempts: exchange.attempts,
                elapsed_ms: exchange.elapsed_ms,
                http_status: exchange.http_status,
                error: exchange.error.clone(),
                timestamp: exchange.timestamp.clone(),
            })?;
        }
        // only clean replies are cached so failures are retried on the next run
        if exchange.status == ExchangeStatus::Ok {
            if let Some(c) = &self.cache {
                c.insert(CacheEntry {
                    key,
                    prompt_id: prompt.id.clone(),
                    backend: r.name().to_string(),
                    model: r.model().to_string(),
                    raw: exchange.raw.clone(),
                    status: exchange.status,
                    timestamp: exchange.timestamp.clone(),
                })?;
            }
        }
        let parsed = match exchange.status {
            ExchangeStatus::Ok => parse_response(&exchange.raw, prompt),
            ExchangeStatus::Malformed => Parsed::failure("malformed backend reply"),
            ExchangeStatus::TransportFailure => Parsed::failure(
                exchange.error.clone().unwrap_or_else(|| "no reply from backend".into()),
            ),
        };
        Ok((
            ResponseRecord {
                prompt_id: prompt.id.clone(),
                raw: exchange.raw,
                parsed,
                backend: r.name().to_string(),
                model: r.model().to_string(),
                status: exchange.status,
                timestamp: exchange.timestamp,
            },
            true,
        ))
    }

    /// Answers every prompt, `parallelism` at a time, keeping corpus order.
    pub fn run_batch(&self, corpus: &[PromptRecord]) -> Result<BatchOutput> {
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<(ResponseRecord, bool)>>>> =
            corpus.iter().map(|_| Mutex::new(None)).collect();
        let workers = self.parallelism.min(corpus.len()).max(1);
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(prompt) = corpus.get(i) else { break };
                    *slots[i].lock().expect("slot lock") = Some(self.complete(prompt));
                });
            }
        });

        let mut summary = BatchSummary {
            total: corpus.len(),
            ..BatchSummary::default()
        };
        let mut responses = Vec::with_capacity(corpus.len());
        for slot in slots {
            let (record, issued) = slot.into_inner().expect("slot lock").expect("every slot filled")?;
            if issued {
                summary.requests_issued += 1;
            } else {
                summary.cache_hits += 1;
            }
            if record.status != ExchangeStatus::Ok {
                summary.failures += 1;
            } else if record.parsed.is_failure() {
                summary.parse_failures += 1;
            }
            responses.push(record);
        }
        Ok(BatchOutput { responses, summary })
    }
}

//! Deterministic respondents used in place of a live model.
//!
//! Every reply is a pure function of the prompt and the mock's parameters.
//! A mock asked about a corpus it does not cover replies with
//! [`UNSUPPORTED`], which parses as a failure.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use wepbench_core::domain::{wep_registry, ChoiceSet, ExchangeStatus, Mode, PromptRecord, Rq2Provenance};
use wepbench_core::metrics::empirical_proportion;
use wepbench_core::promptgen::rq2::{generating_probability, COT_MARKER};
use wepbench_core::stats::median;
use wepbench_core::survey::load_survey;

use crate::backend::{Exchange, Respondent};
use crate::wire::ChatRequest;
use crate::{MockKind, MockSpec, Result};

pub const UNSUPPORTED: &str = "This respondent does not answer this kind of prompt.";

#[derive(Debug, Clone)]
pub struct MockRespondent {
    spec: MockSpec,
    name: String,
    /// Survey median per canonical WEP, as a fraction.
    medians: HashMap<String, f64>,
}

impl MockRespondent {
    pub fn new(spec: MockSpec) -> Result<Self> {
        let mut medians = HashMap::new();
        if spec.kind == MockKind::SurveyMedian {
            let path = spec.survey.as_ref().ok_or_else(|| {
                crate::GatewayError::Config("survey-median needs a survey file".into())
            })?;
            let table = load_survey(path)?;
            for wep in wep_registry() {
                if let Ok(values) = table.wep_distribution(wep.canonical_name) {
                    medians.insert(wep.canonical_name.to_string(), median(&values)? / 100.0);
                }
            }
        }
        Ok(MockRespondent {
            name: format!("mock-{}", spec.kind),
            spec,
            medians,
        })
    }

    fn seeded_rng(&self, prompt_id: &str) -> ChaCha8Rng {
        let mut h = Sha256::new();
        h.update(self.spec.seed.to_le_bytes());
        h.update(prompt_id.as_bytes());
        let digest = h.finalize();
        ChaCha8Rng::seed_from_u64(u64::from_le_bytes(digest[..8].try_into().expect("8 bytes")))
    }

    fn answer(&self, prompt: &PromptRecord) -> String {
        match (self.spec.kind, prompt.rq2()) {
            (MockKind::ConstantChoice, Some(p)) => {
                let set = p.choice_set.set();
                let reply = match set.rank_of_phrase(&self.spec.choice) {
                    Some(r) => set.choices[r].labelled(),
                    // not offered: echo the bare phrase, which then fails to parse
                    None => self.spec.choice.clone(),
                };
                in_mode(reply, prompt.mode)
            }
            (MockKind::SampleCalibrated, Some(p)) => by_probability(p, empirical_proportion(p), prompt.mode),
            (MockKind::GaussianCalibrated, Some(p)) => by_probability(p, generating_probability(p), prompt.mode),
            (MockKind::UniformRandom, Some(p)) => {
                let set: &ChoiceSet = p.choice_set.set();
                let rank = self.seeded_rng(&prompt.id).random_range(0..set.len());
                in_mode(set.choices[rank].labelled(), prompt.mode)
            }
            (MockKind::UniformRandom, None) => {
                let pct: u32 = self.seeded_rng(&prompt.id).random_range(0..=100);
                format!("{}", pct as f64 / 100.0)
            }
            (MockKind::SurveyMedian, None) => prompt
                .rq1()
                .and_then(|p| self.medians.get(&p.wep))
                .map(|m| format!("{m}"))
                .unwrap_or_else(|| UNSUPPORTED.to_string()),
            _ => UNSUPPORTED.to_string(),
        }
    }
}

fn in_mode(reply: String, mode: Mode) -> String {
    match mode {
        Mode::Standard => reply,
        Mode::Cot => format!("{COT_MARKER} {reply}"),
    }
}

fn by_probability(p: &Rq2Provenance, probability: f64, mode: Mode) -> String {
    let set = p.choice_set.set();
    let rank = set.rank_for_probability(probability).expect("ranges partition [0, 1]");
    in_mode(set.choices[rank].labelled(), mode)
}

impl Respondent for MockRespondent {
    fn name(&self) -> &str {
        &self.name
    }

    fn model(&self) -> &str {
        "mock"
    }

    fn respond(&self, prompt: &PromptRecord) -> Exchange {
        let request = ChatRequest::user(self.model(), &prompt.body, self.temperature());
        Exchange {
            request: serde_json::to_string(&request).expect("request serializes"),
            raw: self.answer(prompt),
            status: ExchangeStatus::Ok,
            attempts: 1,
            elapsed_ms: 0,
            http_status: None,
            error: None,
            timestamp: None,
        }
    }
}

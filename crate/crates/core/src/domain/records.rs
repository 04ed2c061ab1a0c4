use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ChoiceSetId, ConfidencePoint, IntervalKind, Language, Setting};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Corpus {
    Rq1,
    Rq2,
}

/// Plain prompting or the zero-shot chain-of-thought rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Standard,
    Cot,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Cot => "cot",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "standard" => Ok(Mode::Standard),
            "cot" => Ok(Mode::Cot),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Height,
    Score,
    Sound,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Height, Scenario::Score, Scenario::Sound];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Height => "height",
            Scenario::Score => "score",
            Scenario::Sound => "sound",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which generating distribution the 20 observations come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumbersId {
    /// N(100, 10)
    Narrow,
    /// N(100, 40)
    Wide,
}

impl NumbersId {
    pub const ALL: [NumbersId; 2] = [NumbersId::Narrow, NumbersId::Wide];

    pub fn as_str(&self) -> &'static str {
        match self {
            NumbersId::Narrow => "narrow",
            NumbersId::Wide => "wide",
        }
    }

    pub fn std_dev(&self) -> f64 {
        match self {
            NumbersId::Narrow => 10.0,
            NumbersId::Wide => 40.0,
        }
    }
}

impl fmt::Display for NumbersId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NumbersId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "narrow" => Ok(NumbersId::Narrow),
            "wide" => Ok(NumbersId::Wide),
            other => Err(Error::InvalidConfig(format!("unknown numbers set {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rq1Provenance {
    pub template_id: String,
    pub setting: Setting,
    /// Canonical WEP name.
    pub wep: String,
}

/// Everything needed to recompute an RQ2 prompt's ground truth without any
/// registry lookups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rq2Provenance {
    pub scenario: Scenario,
    pub choice_set: ChoiceSetId,
    pub numbers: NumbersId,
    pub interval: IntervalKind,
    pub level: ConfidencePoint,
    pub low: i64,
    pub high: i64,
    pub mean: f64,
    pub std_dev: f64,
    pub observations: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Rq1(Rq1Provenance),
    Rq2(Rq2Provenance),
}

impl Provenance {
    pub fn corpus(&self) -> Corpus {
        match self {
            Provenance::Rq1(_) => Corpus::Rq1,
            Provenance::Rq2(_) => Corpus::Rq2,
        }
    }
}

/// A fully instantiated prompt plus the metadata every metric needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub id: String,
    pub corpus: Corpus,
    pub body: String,
    pub language: Language,
    pub mode: Mode,
    pub provenance: Provenance,
}

impl PromptRecord {
    pub fn validate(&self) -> Result<()> {
        if self.body.trim().is_empty() {
            return Err(Error::Validation(format!("prompt {} has an empty body", self.id)));
        }
        if self.provenance.corpus() != self.corpus {
            return Err(Error::Validation(format!(
                "prompt {} is tagged {:?} but carries {:?} provenance",
                self.id,
                self.corpus,
                self.provenance.corpus()
            )));
        }
        Ok(())
    }

    pub fn rq1(&self) -> Option<&Rq1Provenance> {
        match &self.provenance {
            Provenance::Rq1(p) => Some(p),
            Provenance::Rq2(_) => None,
        }
    }

    pub fn rq2(&self) -> Option<&Rq2Provenance> {
        match &self.provenance {
            Provenance::Rq2(p) => Some(p),
            Provenance::Rq1(_) => None,
        }
    }
}

/// Result of interpreting a raw reply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parsed {
    Probability {
        value: f64,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        ambiguous: bool,
    },
    Choice {
        label: char,
        phrase: String,
    },
    Failure {
        reason: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        ambiguous: bool,
    },
}

impl Parsed {
    pub fn failure(reason: impl Into<String>) -> Self {
        Parsed::Failure {
            reason: reason.into(),
            ambiguous: false,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Parsed::Failure { .. })
    }

    pub fn probability(&self) -> Option<f64> {
        match self {
            Parsed::Probability { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// The parsed fraction on the percentage scale used by every distribution
    /// comparison. Rounded to 1e-6 so decimal replies map to exact percentages.
    pub fn percentage(&self) -> Option<f64> {
        self.probability().map(|p| (p * 100.0 * 1e6).round() / 1e6)
    }
}

/// Outcome of the exchange with the backend, separate from parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExchangeStatus {
    Ok,
    /// The backend answered but the reply had no usable message content.
    Malformed,
    /// No reply after all retries.
    TransportFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub prompt_id: String,
    pub raw: String,
    pub parsed: Parsed,
    pub backend: String,
    pub model: String,
    pub status: ExchangeStatus,
    /// RFC 3339 time of the original exchange; mocks leave it empty so their
    /// output stays a pure function of the corpus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl ResponseRecord {
    /// Checks the record against the prompt it answers.
    pub fn validate(&self, prompt: &PromptRecord) -> Result<()> {
        if self.prompt_id != prompt.id {
            return Err(Error::Validation(format!(
                "response for {} matched against prompt {}",
                self.prompt_id, prompt.id
            )));
        }
        match &self.parsed {
            Parsed::Probability { value, .. } if !(0.0..=1.0).contains(value) => Err(Error::Validation(
                format!("response {} has probability {value} outside [0, 1]", self.prompt_id),
            )),
            Parsed::Choice { label, phrase } => {
                let set = prompt
                    .rq2()
                    .ok_or_else(|| Error::Validation(format!("choice answer for non-choice prompt {}", prompt.id)))?
                    .choice_set
                    .set();
                match set.rank_of_label(*label) {
                    Some(r) if set.choices[r].phrase == phrase => Ok(()),
                    _ => Err(Error::Validation(format!(
                        "response {} picks {label}.{phrase}, not in {}",
                        self.prompt_id, set.id
                    ))),
                }
            }
            _ => Ok(()),
        }
    }
}

//! Shared vocabulary for both corpora.

mod choice;
mod confidence;
mod interval;
mod records;
mod template;
mod wep;

pub use choice::{
    choice_set, complementary_choice, Choice, ChoiceSet, ChoiceSetId, ProbabilityRange,
};
pub use confidence::ConfidencePoint;
pub use interval::{Direction, IntervalKind};
pub use records::{
    Corpus, ExchangeStatus, Mode, NumbersId, Parsed, PromptRecord, Provenance, ResponseRecord,
    Rq1Provenance, Rq2Provenance, Scenario,
};
pub use template::{PLACEHOLDER, ContextTemplate, Language, Setting, TemplateRegistry};
pub use wep::{wep_by_name, wep_registry, Wep};

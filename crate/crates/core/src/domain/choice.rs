use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Identifier of one of the two answer sets offered to a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceSetId {
    FiveChoices,
    ThreeChoices,
}

impl ChoiceSetId {
    pub const ALL: [ChoiceSetId; 2] = [ChoiceSetId::FiveChoices, ChoiceSetId::ThreeChoices];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChoiceSetId::FiveChoices => "five_choices",
            ChoiceSetId::ThreeChoices => "three_choices",
        }
    }

    pub fn set(&self) -> &'static ChoiceSet {
        match self {
            ChoiceSetId::FiveChoices => &FIVE,
            ChoiceSetId::ThreeChoices => &THREE,
        }
    }
}

impl fmt::Display for ChoiceSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChoiceSetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "five_choices" | "five" | "5" => Ok(ChoiceSetId::FiveChoices),
            "three_choices" | "three" | "3" => Ok(ChoiceSetId::ThreeChoices),
            other => Err(Error::InvalidConfig(format!(
                "unknown choice set {other:?} (expected five_choices or three_choices)"
            ))),
        }
    }
}

/// A probability interval with per-side inclusivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityRange {
    pub low: f64,
    pub high: f64,
    pub low_inclusive: bool,
    pub high_inclusive: bool,
}

impl ProbabilityRange {
    const fn new(low: f64, low_inclusive: bool, high: f64, high_inclusive: bool) -> Self {
        ProbabilityRange {
            low,
            high,
            low_inclusive,
            high_inclusive,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        let above = if self.low_inclusive { p >= self.low } else { p > self.low };
        let below = if self.high_inclusive { p <= self.high } else { p < self.high };
        above && below
    }

    pub fn midpoint(&self) -> f64 {
        (self.low + self.high) / 2.0
    }
}

impl fmt::Display for ProbabilityRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.low_inclusive { '[' } else { '(' };
        let close = if self.high_inclusive { ']' } else { ')' };
        write!(f, "{open}{}, {}{close}", self.low, self.high)
    }
}

/// One lettered answer option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Choice {
    pub label: char,
    pub phrase: &'static str,
    pub range: ProbabilityRange,
}

impl Choice {
    /// The `A.is almost certainly` form used in prompts and mock replies.
    pub fn labelled(&self) -> String {
        format!("{}.{}", self.label, self.phrase)
    }
}

/// An ordered answer set, most likely choice first.
///
/// A choice's *rank* is its index in `choices`; every order comparison in the
/// metrics goes through ranks.
#[derive(Debug)]
pub struct ChoiceSet {
    pub id: ChoiceSetId,
    pub choices: &'static [Choice],
}

static FIVE_CHOICES: [Choice; 5] = [
    Choice {
        label: 'A',
        phrase: "is almost certainly",
        range: ProbabilityRange::new(0.92, false, 1.0, true),
    },
    Choice {
        label: 'B',
        phrase: "is likely to be",
        range: ProbabilityRange::new(0.61, false, 0.92, true),
    },
    Choice {
        label: 'C',
        phrase: "is maybe",
        range: ProbabilityRange::new(0.41, true, 0.61, true),
    },
    Choice {
        label: 'D',
        phrase: "is unlikely to be",
        range: ProbabilityRange::new(0.13, true, 0.41, false),
    },
    Choice {
        label: 'E',
        phrase: "is almost certainly not",
        range: ProbabilityRange::new(0.0, true, 0.13, false),
    },
];

static THREE_CHOICES: [Choice; 3] = [
    Choice {
        label: 'A',
        phrase: "is likely to be",
        range: ProbabilityRange::new(0.61, false, 1.0, true),
    },
    Choice {
        label: 'B',
        phrase: "is maybe",
        range: ProbabilityRange::new(0.41, true, 0.61, true),
    },
    Choice {
        label: 'C',
        phrase: "is unlikely to be",
        range: ProbabilityRange::new(0.0, true, 0.41, false),
    },
];

static FIVE: ChoiceSet = ChoiceSet {
    id: ChoiceSetId::FiveChoices,
    choices: &FIVE_CHOICES,
};

static THREE: ChoiceSet = ChoiceSet {
    id: ChoiceSetId::ThreeChoices,
    choices: &THREE_CHOICES,
};

/// Looks up a choice set by name (`five_choices`, `three_choices`).
pub fn choice_set(id: &str) -> Result<&'static ChoiceSet> {
    Ok(id.parse::<ChoiceSetId>()?.set())
}

/// The paired complement of `choice` within `set`; the middle choice maps to
/// itself.
///
/// Panics if `choice` is not a member of `set`.
pub fn complementary_choice<'a>(choice: &Choice, set: &'a ChoiceSet) -> &'a Choice {
    let rank = set
        .rank_of_label(choice.label)
        .filter(|&r| set.choices[r].phrase == choice.phrase)
        .expect("choice belongs to the set");
    &set.choices[set.complement_rank(rank)]
}

impl ChoiceSet {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn get(&self, rank: usize) -> Option<&'static Choice> {
        self.choices.get(rank)
    }

    pub fn rank_of_label(&self, label: char) -> Option<usize> {
        let label = label.to_ascii_uppercase();
        self.choices.iter().position(|c| c.label == label)
    }

    pub fn rank_of_phrase(&self, phrase: &str) -> Option<usize> {
        let phrase = phrase.trim().to_lowercase();
        self.choices.iter().position(|c| c.phrase == phrase)
    }

    pub fn complement_rank(&self, rank: usize) -> usize {
        self.choices.len() - 1 - rank
    }

    /// Rank of the unique choice whose range contains `p`.
    pub fn rank_for_probability(&self, p: f64) -> Option<usize> {
        self.choices.iter().position(|c| c.range.contains(p))
    }

    /// `A.is almost certainly B.is likely to be ...`
    pub fn render(&self) -> String {
        self.choices
            .iter()
            .map(Choice::labelled)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

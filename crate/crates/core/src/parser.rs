//! Turns raw replies into a probability or a choice.
//!
//! A reply that cannot be read yields [`Parsed::Failure`]; metrics score
//! failures as wrong rather than dropping them.

use std::sync::OnceLock;

use regex::Regex;

use crate::domain::{ChoiceSet, ChoiceSetId, Corpus, Mode, Parsed, PromptRecord};
use crate::promptgen::rq2::COT_MARKER;

fn number_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"-?(?:\d+(?:\.\d+)?|\.\d+)").expect("valid regex"))
}

fn percent_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)^\s*(?:%|％|percent\b)").expect("valid regex"))
}

/// Reads the first decimal literal. A literal followed by `%` or "percent"
/// is divided by 100. Further literals with a different value set the
/// ambiguity flag without changing the answer.
pub fn parse_probability(raw: &str) -> Parsed {
    let mut values = Vec::new();
    for m in number_re().find_iter(raw) {
        // digits glued to letters ("gpt4", "x2") are not answers
        let glued = raw[..m.start()].chars().next_back().is_some_and(|c| c.is_ascii_alphabetic());
        if glued {
            continue;
        }
        let Ok(mut v) = m.as_str().parse::<f64>() else { continue };
        if percent_re().is_match(&raw[m.end()..]) {
            v /= 100.0;
        }
        values.push(v);
    }
    let Some(&first) = values.first() else {
        return Parsed::failure("no numeric literal");
    };
    let ambiguous = values.iter().any(|v| (v - first).abs() > 1e-12);
    if !(0.0..=1.0).contains(&first) {
        return Parsed::Failure {
            reason: format!("value {first} outside [0, 1]"),
            ambiguous,
        };
    }
    Parsed::Probability { value: first, ambiguous }
}

fn phrase_res() -> &'static [(usize, Regex)] {
    static RES: OnceLock<Vec<(usize, Regex)>> = OnceLock::new();
    RES.get_or_init(|| {
        // every phrase appears in the five-choice set; longest first so that
        // "is almost certainly not" is consumed before "is almost certainly"
        let five = ChoiceSetId::FiveChoices.set();
        let mut ranks: Vec<usize> = (0..five.len()).collect();
        ranks.sort_by_key(|&r| std::cmp::Reverse(five.choices[r].phrase.len()));
        ranks
            .into_iter()
            .map(|r| {
                let words: Vec<&str> = five.choices[r].phrase.split(' ').collect();
                let pattern = format!(r"(?i)\b{}\b", words.join(r"\s+"));
                (r, Regex::new(&pattern).expect("valid regex"))
            })
            .collect()
    })
}

fn label_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"^[\s"'*(\[]*([A-Ea-e])(?:\s*[.):\]]|\s*$|\s+is\b)"#).expect("valid regex")
    })
}

/// Reads a lettered choice. Chain-of-thought replies are searched after the
/// last "I choose:" marker only.
pub fn parse_choice(raw: &str, set: &ChoiceSet, mode: Mode) -> Parsed {
    let text = match mode {
        Mode::Standard => raw,
        Mode::Cot => {
            let lower = raw.to_lowercase();
            match lower.rfind(&COT_MARKER.to_lowercase()) {
                // lowercasing ASCII keeps byte offsets; guard anyway
                Some(i) if lower.len() == raw.len() => &raw[i + COT_MARKER.len()..],
                Some(_) => return Parsed::failure("cannot locate final choice marker"),
                None => return Parsed::failure("no final choice after 'I choose:'"),
            }
        }
    };

    let five = ChoiceSetId::FiveChoices.set();
    let mut masked = text.to_string();
    let mut found: Vec<usize> = Vec::new();
    for (rank, re) in phrase_res() {
        let hits: Vec<_> = re.find_iter(&masked).map(|m| m.range()).collect();
        if hits.is_empty() {
            continue;
        }
        if !found.contains(rank) {
            found.push(*rank);
        }
        for r in hits {
            masked.replace_range(r.clone(), &" ".repeat(r.len()));
        }
    }

    let label = label_re()
        .captures(text)
        .and_then(|c| c.get(1))
        .map(|m| m.as_str().chars().next().unwrap().to_ascii_uppercase());

    match found.as_slice() {
        [] => match label {
            Some(l) => match set.rank_of_label(l) {
                Some(r) => choice(set, r),
                None => Parsed::failure(format!("label {l} is not offered in {}", set.id)),
            },
            None => Parsed::failure("no choice found"),
        },
        [rank] => {
            let phrase = five.choices[*rank].phrase;
            let Some(r) = set.rank_of_phrase(phrase) else {
                return Parsed::failure(format!("{phrase:?} is not offered in {}", set.id));
            };
            match label {
                Some(l) if set.rank_of_label(l) != Some(r) => Parsed::Failure {
                    reason: format!("label {l} contradicts {phrase:?}"),
                    ambiguous: true,
                },
                _ => choice(set, r),
            }
        }
        _ => Parsed::Failure {
            reason: "more than one choice phrase".into(),
            ambiguous: true,
        },
    }
}

fn choice(set: &ChoiceSet, rank: usize) -> Parsed {
    let c = &set.choices[rank];
    Parsed::Choice {
        label: c.label,
        phrase: c.phrase.to_string(),
    }
}

/// Dispatches on the prompt's corpus.
pub fn parse_response(raw: &str, prompt: &PromptRecord) -> Parsed {
    match (prompt.corpus, prompt.rq2()) {
        (Corpus::Rq2, Some(p)) => parse_choice(raw, p.choice_set.set(), prompt.mode),
        (Corpus::Rq2, None) => Parsed::failure("prompt lacks choice-set provenance"),
        (Corpus::Rq1, _) => parse_probability(raw),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five() -> &'static ChoiceSet {
        ChoiceSetId::FiveChoices.set()
    }

    fn three() -> &'static ChoiceSet {
        ChoiceSetId::ThreeChoices.set()
    }

    fn prob(raw: &str) -> f64 {
        parse_probability(raw).probability().unwrap_or_else(|| panic!("{raw}"))
    }

    fn phrase(p: &Parsed) -> &str {
        match p {
            Parsed::Choice { phrase, .. } => phrase,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn probabilities() {
        assert_eq!(prob("0.85"), 0.85);
        assert_eq!(prob("The probability is 0.70."), 0.70);
        assert_eq!(prob("85%"), 0.85);
        assert_eq!(prob("about 30 percent"), 0.30);
        assert_eq!(prob(".5"), 0.5);
        assert_eq!(prob("1"), 1.0);
        assert_eq!(prob("概率为0.65"), 0.65);
    }

    #[test]
    fn probability_failures() {
        assert!(parse_probability("I cannot say.").is_failure());
        assert!(parse_probability("85").is_failure());
        assert!(parse_probability("-0.2").is_failure());
        assert!(parse_probability("150%").is_failure());
    }

    #[test]
    fn ambiguity_keeps_first() {
        match parse_probability("0.7, or maybe 0.8") {
            Parsed::Probability { value, ambiguous } => {
                assert_eq!(value, 0.7);
                assert!(ambiguous);
            }
            other => panic!("{other:?}"),
        }
        match parse_probability("0.7 (70%)") {
            Parsed::Probability { ambiguous, .. } => assert!(!ambiguous),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn label_and_phrase() {
        assert_eq!(phrase(&parse_choice("C.is maybe", five(), Mode::Standard)), "is maybe");
        assert_eq!(phrase(&parse_choice("c. Is Maybe!", five(), Mode::Standard)), "is maybe");
        assert_eq!(phrase(&parse_choice("B", five(), Mode::Standard)), "is likely to be");
        assert_eq!(phrase(&parse_choice("(A)", three(), Mode::Standard)), "is likely to be");
        assert_eq!(
            phrase(&parse_choice("the specimen's height is unlikely to be below 99", five(), Mode::Standard)),
            "is unlikely to be"
        );
    }

    #[test]
    fn longest_phrase_wins() {
        let p = parse_choice("E.is almost certainly not", five(), Mode::Standard);
        assert_eq!(phrase(&p), "is almost certainly not");
        assert_eq!(phrase(&parse_choice("A.is almost certainly", five(), Mode::Standard)), "is almost certainly");
    }

    #[test]
    fn cot_uses_last_marker() {
        let raw = "The proportion is 12/20 = 0.6, so I choose: B? No. Recomputing... I choose: B.is likely to be";
        assert_eq!(phrase(&parse_choice(raw, five(), Mode::Cot)), "is likely to be");
        assert!(parse_choice("C.is maybe", five(), Mode::Cot).is_failure());
        assert_eq!(phrase(&parse_choice("i choose: c", five(), Mode::Cot)), "is maybe");
    }

    #[test]
    fn choice_failures() {
        assert!(parse_choice("The answer is unclear.", three(), Mode::Standard).is_failure());
        // phrase outside the offered set is never coerced
        assert!(parse_choice("A.is almost certainly", three(), Mode::Standard).is_failure());
        assert!(parse_choice("E", three(), Mode::Standard).is_failure());
        match parse_choice("is maybe or is likely to be", five(), Mode::Standard) {
            Parsed::Failure { ambiguous, .. } => assert!(ambiguous),
            other => panic!("{other:?}"),
        }
        match parse_choice("A.is maybe", five(), Mode::Standard) {
            Parsed::Failure { ambiguous, .. } => assert!(ambiguous),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn words_containing_phrases_do_not_match() {
        assert!(parse_choice("this maybe works", five(), Mode::Standard).is_failure());
    }

    #[test]
    fn printed_choices_round_trip() {
        for id in ChoiceSetId::ALL {
            let set = id.set();
            for c in set.choices {
                let p = parse_choice(&c.labelled(), set, Mode::Standard);
                assert_eq!(p, Parsed::Choice { label: c.label, phrase: c.phrase.into() });
                let again = match &p {
                    Parsed::Choice { label, phrase } => parse_choice(&format!("{label}.{phrase}"), set, Mode::Standard),
                    _ => unreachable!(),
                };
                assert_eq!(again, p);
            }
        }
    }
}

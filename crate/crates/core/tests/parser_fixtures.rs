use wepbench_core::domain::{ChoiceSetId, Mode, Parsed};
use wepbench_core::parser::{parse_choice, parse_probability};

fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split('\t').collect())
}

#[test]
fn hand_labeled_probability_replies() {
    for row in rows(include_str!("data/labeled_probabilities.tsv")) {
        let parsed = parse_probability(row[0]);
        match row[1] {
            "" => assert!(parsed.is_failure(), "{:?} -> {parsed:?}", row[0]),
            want => {
                let want: f64 = want.parse().unwrap();
                assert_eq!(parsed.probability(), Some(want), "{:?}", row[0]);
            }
        }
    }
}

#[test]
fn hand_labeled_choice_replies() {
    for row in rows(include_str!("data/labeled_choices.tsv")) {
        let set = row[1].parse::<ChoiceSetId>().unwrap().set();
        let mode: Mode = row[2].parse().unwrap();
        let parsed = parse_choice(row[0], set, mode);
        match (row[3], &parsed) {
            ("", p) => assert!(p.is_failure(), "{:?} -> {p:?}", row[0]),
            (want, Parsed::Choice { phrase, .. }) => assert_eq!(phrase, want, "{:?}", row[0]),
            (_, p) => panic!("{:?} -> {p:?}", row[0]),
        }
    }
}

//! Statistical elicitation corpus: scenario x choice set x numbers x
//! confidence level x interval, in standard and chain-of-thought form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StdNormal};

use crate::domain::{
    ChoiceSetId, ConfidencePoint, Corpus, IntervalKind, Language, Mode, NumbersId, PromptRecord,
    Provenance, Rq2Provenance, Scenario,
};

pub const SAMPLE_SIZE: usize = 20;
pub const MEAN: f64 = 100.0;
/// Seed that produced the shipped wide fixture.
pub const WIDE_FIXTURE_SEED: u64 = 7;

const NARROW_FIXTURE: [i64; SAMPLE_SIZE] = [
    116, 93, 94, 89, 108, 76, 117, 92, 103, 97, 114, 79, 96, 96, 111, 89, 98, 91, 100, 105,
];
const WIDE_FIXTURE: [i64; SAMPLE_SIZE] = [
    69, 45, 136, 114, 112, 74, 55, 143, 89, 163, 59, 90, 104, 86, 95, 105, 68, 54, 82, 68,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub id: NumbersId,
    pub mean: f64,
    pub std_dev: f64,
    /// `None` for a hand-entered fixture.
    pub seed: Option<u64>,
    pub observations: Vec<i64>,
}

impl EmpiricalSample {
    /// The numbers used in the shipped corpus.
    pub fn fixture(id: NumbersId) -> Self {
        let (seed, observations) = match id {
            NumbersId::Narrow => (None, NARROW_FIXTURE),
            NumbersId::Wide => (Some(WIDE_FIXTURE_SEED), WIDE_FIXTURE),
        };
        EmpiricalSample {
            id,
            mean: MEAN,
            std_dev: id.std_dev(),
            seed,
            observations: observations.to_vec(),
        }
    }

    pub fn sample_mean(&self) -> f64 {
        self.observations.iter().sum::<i64>() as f64 / self.observations.len() as f64
    }

    /// Share of observations strictly inside `kind`.
    pub fn proportion_in(&self, kind: IntervalKind, cuts: &CutPoints) -> f64 {
        proportion_in(&self.observations, kind, cuts.low, cuts.high)
    }
}

pub fn proportion_in(observations: &[i64], kind: IntervalKind, low: i64, high: i64) -> f64 {
    let inside = observations
        .iter()
        .filter(|&&x| kind.contains(x as f64, low as f64, high as f64))
        .count();
    inside as f64 / observations.len() as f64
}

/// Twenty draws from N(100, sigma) rounded to integers.
pub fn sample_numbers(id: NumbersId, seed: u64) -> EmpiricalSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(MEAN, id.std_dev()).expect("positive sigma");
    let observations = (0..SAMPLE_SIZE)
        .map(|_| normal.sample(&mut rng).round() as i64)
        .collect();
    EmpiricalSample {
        id,
        mean: MEAN,
        std_dev: id.std_dev(),
        seed: Some(seed),
        observations,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutPoints {
    pub level: ConfidencePoint,
    pub low: i64,
    pub high: i64,
    pub p_below_low: f64,
    pub p_below_high: f64,
}

fn standard_normal() -> StdNormal {
    StdNormal::new(0.0, 1.0).expect("unit normal")
}

/// Central interval of the generating distribution at `level`, rounded to
/// integers half away from zero. Probabilities use the rounded ends.
pub fn compute_cut_points(mean: f64, std_dev: f64, level: ConfidencePoint) -> CutPoints {
    let n = standard_normal();
    let z = n.inverse_cdf((1.0 + level.level()) / 2.0);
    let low = (mean - z * std_dev).round() as i64;
    let high = (mean + z * std_dev).round() as i64;
    CutPoints {
        level,
        low,
        high,
        p_below_low: n.cdf((low as f64 - mean) / std_dev),
        p_below_high: n.cdf((high as f64 - mean) / std_dev),
    }
}

/// Probability mass of `kind` under N(mean, std_dev).
pub fn interval_probability(kind: IntervalKind, cuts: &CutPoints) -> f64 {
    let (lo, hi) = (cuts.p_below_low, cuts.p_below_high);
    match kind {
        IntervalKind::BelowLow => lo,
        IntervalKind::AboveLow => 1.0 - lo,
        IntervalKind::Between => hi - lo,
        IntervalKind::BelowLowOrAboveHigh => lo + 1.0 - hi,
        IntervalKind::BelowHigh => hi,
        IntervalKind::AboveHigh => 1.0 - hi,
    }
}

/// Probability that one more draw from the generating distribution lands
/// strictly inside the prompt's interval.
pub fn generating_probability(p: &Rq2Provenance) -> f64 {
    let n = standard_normal();
    let cuts = CutPoints {
        level: p.level,
        low: p.low,
        high: p.high,
        p_below_low: n.cdf((p.low as f64 - p.mean) / p.std_dev),
        p_below_high: n.cdf((p.high as f64 - p.mean) / p.std_dev),
    };
    interval_probability(p.interval, &cuts)
}

pub fn render_interval(kind: IntervalKind, cuts: &CutPoints) -> String {
    kind.render(cuts.low, cuts.high)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioTemplate {
    pub id: Scenario,
    /// `{}` takes the comma-separated observations.
    pub preamble: &'static str,
    /// `{}` takes the rendered interval.
    pub sentence_frame: &'static str,
}

// Score and Sound wordings are authored to mirror the Height one.
static SCENARIOS: [ScenarioTemplate; 3] = [
    ScenarioTemplate {
        id: Scenario::Height,
        preamble: "I randomly picked 20 specimens from an unknown population. I recorded their heights, which are {}.",
        sentence_frame: "Based on this information, if I randomly pick one additional specimen from the same population, the specimen's height _ {}.",
    },
    ScenarioTemplate {
        id: Scenario::Score,
        preamble: "I randomly picked 20 students from an unknown population. I recorded their test scores, which are {}.",
        sentence_frame: "Based on this information, if I randomly pick one additional student from the same population, the student's test score _ {}.",
    },
    ScenarioTemplate {
        id: Scenario::Sound,
        preamble: "I randomly picked 20 recordings from an unknown population. I recorded their sound levels, which are {}.",
        sentence_frame: "Based on this information, if I randomly pick one additional recording from the same population, the recording's sound level _ {}.",
    },
];

pub fn scenario_template(id: Scenario) -> &'static ScenarioTemplate {
    SCENARIOS.iter().find(|s| s.id == id).expect("every scenario has a template")
}

pub fn scenario_templates() -> &'static [ScenarioTemplate] {
    &SCENARIOS
}

const TASK: &str = "Complete the following sentence using one of the choices, listed in descending order of likelihood, that best fits the sentence:";
const COT_LEAD: &str = "First compute the associated probability. Then complete the following sentence using one of the choices, listed in descending order of likelihood, that best fits the sentence:";
pub const COT_MARKER: &str = "I choose:";

pub fn rq2_prompt_id(
    scenario: Scenario,
    choice_set: ChoiceSetId,
    numbers: NumbersId,
    level: ConfidencePoint,
    kind: IntervalKind,
    mode: Mode,
) -> String {
    format!("rq2-{scenario}-{choice_set}-{numbers}-{level}-{kind}-{mode}")
}

pub fn build_rq2_prompt(
    scenario: Scenario,
    choice_set: ChoiceSetId,
    sample: &EmpiricalSample,
    kind: IntervalKind,
    level: ConfidencePoint,
    mode: Mode,
) -> PromptRecord {
    let template = scenario_template(scenario);
    let cuts = compute_cut_points(sample.mean, sample.std_dev, level);
    let numbers = sample
        .observations
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    let choices = choice_set.set().render();
    let head = match mode {
        Mode::Standard => format!("{TASK} {choices}."),
        Mode::Cot => format!("{COT_LEAD} {choices}. Give your final choice after '{COT_MARKER}'."),
    };
    let body = format!(
        "{head} {} {}",
        template.preamble.replacen("{}", &numbers, 1),
        template.sentence_frame.replacen("{}", &render_interval(kind, &cuts), 1)
    );
    PromptRecord {
        id: rq2_prompt_id(scenario, choice_set, sample.id, level, kind, mode),
        corpus: Corpus::Rq2,
        body,
        language: Language::English,
        mode,
        provenance: Provenance::Rq2(Rq2Provenance {
            scenario,
            choice_set,
            numbers: sample.id,
            interval: kind,
            level,
            low: cuts.low,
            high: cuts.high,
            mean: sample.mean,
            std_dev: sample.std_dev,
            observations: sample.observations.clone(),
        }),
    }
}

/// The 360-prompt corpus for one mode over the shipped fixtures.
pub fn generate_rq2_corpus(mode: Mode) -> Vec<PromptRecord> {
    generate_rq2_corpus_with(
        mode,
        &EmpiricalSample::fixture(NumbersId::Narrow),
        &EmpiricalSample::fixture(NumbersId::Wide),
    )
}

/// Same layout over caller-supplied samples, e.g. fresh seeded draws.
pub fn generate_rq2_corpus_with(mode: Mode, narrow: &EmpiricalSample, wide: &EmpiricalSample) -> Vec<PromptRecord> {
    let mut out = Vec::with_capacity(360);
    for scenario in Scenario::ALL {
        for choice_set in ChoiceSetId::ALL {
            for sample in [narrow, wide] {
                for level in ConfidencePoint::ALL {
                    for kind in IntervalKind::ALL {
                        out.push(build_rq2_prompt(scenario, choice_set, sample, kind, level, mode));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    const WORKED_EXAMPLE: &str = "Complete the following sentence using one of the choices, listed in descending order of likelihood, that best fits the sentence: A.is almost certainly B.is likely to be C.is maybe D.is unlikely to be E.is almost certainly not. I randomly picked 20 specimens from an unknown population. I recorded their heights, which are 116, 93, 94, 89, 108, 76, 117, 92, 103, 97, 114, 79, 96, 96, 111, 89, 98, 91, 100, 105. Based on this information, if I randomly pick one additional specimen from the same population, the specimen's height _ below 99.";

    fn cp(i: usize) -> ConfidencePoint {
        ConfidencePoint::from_index(i).unwrap()
    }

    #[test]
    fn narrow_fixture_mean() {
        let s = EmpiricalSample::fixture(NumbersId::Narrow);
        assert_eq!(s.observations.len(), 20);
        assert!((s.sample_mean() - 98.2).abs() < 1e-12);
    }

    #[test]
    fn wide_fixture_is_reproducible() {
        let fresh = sample_numbers(NumbersId::Wide, WIDE_FIXTURE_SEED);
        assert_eq!(fresh, EmpiricalSample::fixture(NumbersId::Wide));
        assert_eq!(fresh.std_dev, 40.0);
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(sample_numbers(NumbersId::Narrow, 3), sample_numbers(NumbersId::Narrow, 3));
        assert_ne!(sample_numbers(NumbersId::Narrow, 3), sample_numbers(NumbersId::Narrow, 4));
    }

    #[test]
    fn cut_points_match_quantile_oracle() {
        // rounded mean -/+ z*sigma from an independent inverse-CDF evaluation
        let narrow = [(99, 101), (96, 104), (93, 107), (89, 111), (80, 120)];
        let wide = [(97, 103), (86, 114), (73, 127), (56, 144), (22, 178)];
        for (i, (lo, hi)) in narrow.into_iter().enumerate() {
            let c = compute_cut_points(100.0, 10.0, cp(i));
            assert_eq!((c.low, c.high), (lo, hi));
        }
        for (i, (lo, hi)) in wide.into_iter().enumerate() {
            let c = compute_cut_points(100.0, 40.0, cp(i));
            assert_eq!((c.low, c.high), (lo, hi));
        }
        let c = compute_cut_points(100.0, 10.0, cp(0));
        assert!((c.p_below_low - 0.460172).abs() < 1e-6);
        let c = compute_cut_points(100.0, 40.0, cp(3));
        assert!((c.p_below_high - 0.864334).abs() < 1e-6);
    }

    #[test]
    fn cut_point_probabilities_are_monotone() {
        for sd in [10.0, 40.0] {
            let cuts: Vec<_> = ConfidencePoint::ALL.iter().map(|&l| compute_cut_points(100.0, sd, l)).collect();
            for w in cuts.windows(2) {
                assert!(w[1].p_below_low < w[0].p_below_low);
                assert!(w[1].p_below_high > w[0].p_below_high);
            }
            for c in &cuts {
                assert!(c.low < c.high);
                assert_eq!(c.low + c.high, 200);
            }
        }
    }

    #[test]
    fn generating_probability_uses_rounded_cuts() {
        let corpus = generate_rq2_corpus(Mode::Standard);
        let p = corpus[0].rq2().unwrap();
        assert_eq!((p.low, p.interval), (99, IntervalKind::BelowLow));
        assert!((generating_probability(p) - 0.460172).abs() < 1e-6);
    }

    #[test]
    fn worked_example() {
        let sample = EmpiricalSample::fixture(NumbersId::Narrow);
        let p = build_rq2_prompt(
            Scenario::Height,
            ChoiceSetId::FiveChoices,
            &sample,
            IntervalKind::BelowLow,
            cp(0),
            Mode::Standard,
        );
        assert_eq!(p.body, WORKED_EXAMPLE);
        let cuts = compute_cut_points(100.0, 10.0, cp(0));
        assert_eq!(render_interval(IntervalKind::BelowLow, &cuts), "below 99");
        assert!((sample.proportion_in(IntervalKind::BelowLow, &cuts) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn cot_rewrite() {
        let sample = EmpiricalSample::fixture(NumbersId::Narrow);
        let p = build_rq2_prompt(
            Scenario::Height,
            ChoiceSetId::FiveChoices,
            &sample,
            IntervalKind::BelowLow,
            cp(0),
            Mode::Cot,
        );
        assert!(p.body.starts_with("First compute the associated probability. Then complete the following sentence"));
        assert!(p.body.contains("E.is almost certainly not. Give your final choice after 'I choose:'. I randomly picked"));
        let tail = WORKED_EXAMPLE.split_once("not. ").unwrap().1;
        assert!(p.body.ends_with(tail));
    }

    #[test]
    fn lettered_choices_match_set_size() {
        for p in generate_rq2_corpus(Mode::Standard) {
            let set = p.rq2().unwrap().choice_set.set();
            let letters = ['A', 'B', 'C', 'D', 'E']
                .iter()
                .filter(|l| p.body.contains(&format!("{l}.is ")))
                .count();
            assert_eq!(letters, set.len(), "{}", p.id);
        }
    }

    #[test]
    fn corpus_layout() {
        for mode in [Mode::Standard, Mode::Cot] {
            let corpus = generate_rq2_corpus(mode);
            assert_eq!(corpus.len(), 360);
            let five_narrow = corpus
                .iter()
                .filter(|p| {
                    let r = p.rq2().unwrap();
                    r.choice_set == ChoiceSetId::FiveChoices && r.numbers == NumbersId::Narrow
                })
                .count();
            assert_eq!(five_narrow, 90);
            let mut by_level: HashMap<_, Vec<IntervalKind>> = HashMap::new();
            let mut by_interval: HashMap<_, usize> = HashMap::new();
            for p in &corpus {
                let r = p.rq2().unwrap();
                by_level
                    .entry((r.scenario, r.choice_set, r.numbers, r.level))
                    .or_default()
                    .push(r.interval);
                *by_interval.entry((r.scenario, r.choice_set, r.numbers, r.interval)).or_default() += 1;
                assert_eq!(p.mode, mode);
                p.validate().unwrap();
            }
            assert_eq!(by_level.len(), 60);
            for kinds in by_level.values() {
                assert_eq!(kinds.len(), 6);
                for k in kinds {
                    assert!(kinds.contains(&k.complement()));
                }
            }
            assert_eq!(by_interval.len(), 72);
            assert!(by_interval.values().all(|&n| n == 5));
        }
    }

    #[test]
    fn corpus_is_deterministic_with_unique_ids() {
        let a = generate_rq2_corpus(Mode::Cot);
        assert_eq!(a, generate_rq2_corpus(Mode::Cot));
        let ids: std::collections::HashSet<_> = a.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids.len(), 360);
    }
}

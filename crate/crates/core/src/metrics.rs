//! The four consistency metrics over a complete statistical corpus, with
//! exact and Monte-Carlo random baselines.
//!
//! Units are keyed by provenance, never by list position, so reordering the
//! responses cannot change a score. A parse failure anywhere in a unit makes
//! the unit wrong.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{
    Choice, ChoiceSetId, ConfidencePoint, Direction, IntervalKind, Mode, NumbersId, Parsed,
    PromptRecord, ResponseRecord, Rq2Provenance, Scenario,
};
use crate::promptgen::rq2::proportion_in;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Pairwise,
    Monotonicity,
    Empirical,
    EmpiricalMonotonicity,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Pairwise,
        Metric::Monotonicity,
        Metric::Empirical,
        Metric::EmpiricalMonotonicity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Pairwise => "pairwise",
            Metric::Monotonicity => "monotonicity",
            Metric::Empirical => "empirical",
            Metric::EmpiricalMonotonicity => "empirical_monotonicity",
        }
    }

    /// Units on a complete 360-prompt corpus.
    pub fn expected_units(&self) -> usize {
        match self {
            Metric::Pairwise => 180,
            Metric::Monotonicity => 72,
            Metric::Empirical => 360,
            Metric::EmpiricalMonotonicity => 288,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVerdict {
    pub unit_id: String,
    pub verdict: u8,
    pub scenario: Scenario,
    pub choice_set: ChoiceSetId,
    pub numbers: NumbersId,
    /// Probability that uniformly random answers pass this unit.
    pub chance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub axis: String,
    pub value: String,
    pub n_units: usize,
    pub score: f64,
    pub baseline: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEstimate {
    /// Percentage.
    pub value: f64,
    /// Standard error of `value`, zero for exact baselines.
    pub standard_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric: Metric,
    pub mode: Mode,
    pub score: f64,
    pub n_units: usize,
    /// Exact expected score of uniformly random answers.
    pub baseline: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_montecarlo: Option<BaselineEstimate>,
    pub strata: Vec<Stratum>,
    pub items: Vec<UnitVerdict>,
}

impl MetricReport {
    /// One CSV row per unit with its 0/1 verdict.
    pub fn write_units_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["metric", "mode", "unit_id", "scenario", "choice_set", "numbers", "verdict"])?;
        for item in &self.items {
            w.write_record([
                self.metric.as_str(),
                self.mode.as_str(),
                &item.unit_id,
                item.scenario.as_str(),
                item.choice_set.as_str(),
                item.numbers.as_str(),
                &item.verdict.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Share of the 20 observations strictly inside the prompt's interval.
pub fn empirical_proportion(p: &Rq2Provenance) -> f64 {
    proportion_in(&p.observations, p.interval, p.low, p.high)
}

fn rq2(prompt: &PromptRecord) -> Result<&Rq2Provenance> {
    prompt
        .rq2()
        .ok_or_else(|| Error::Validation(format!("{} is not a statistical prompt", prompt.id)))
}

/// The choice whose range contains the empirical proportion.
pub fn empirical_ground_truth(prompt: &PromptRecord) -> Result<&'static Choice> {
    let p = rq2(prompt)?;
    let set = p.choice_set.set();
    let rank = set
        .rank_for_probability(empirical_proportion(p))
        .expect("choice ranges partition [0, 1]");
    Ok(&set.choices[rank])
}

fn ground_truth_rank(p: &Rq2Provenance) -> usize {
    p.choice_set
        .set()
        .rank_for_probability(empirical_proportion(p))
        .expect("choice ranges partition [0, 1]")
}

// -- exact per-unit chance by enumeration --------------------------------

fn sequences(k: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..k.pow(len as u32)).map(move |mut code| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        seq
    })
}

fn share(k: usize, len: usize, pass: impl Fn(&[usize]) -> bool) -> f64 {
    let total = k.pow(len as u32);
    sequences(k, len).filter(|s| pass(s)).count() as f64 / total as f64
}

fn complementary(k: usize, a: usize, b: usize) -> bool {
    a + b == k - 1
}

fn monotone(ranks: &[usize], direction: Direction) -> bool {
    ranks.windows(2).all(|w| match direction {
        // rising probability means falling rank (rank 0 is most likely)
        Direction::Increasing => w[1] <= w[0],
        Direction::Decreasing => w[1] >= w[0],
    })
}

fn sign(from: usize, to: usize) -> i8 {
    (to as i64 - from as i64).signum() as i8
}

/// Chance that two uniform answers form a complementary pair.
pub fn exact_pairwise_chance(k: usize) -> f64 {
    share(k, 2, |s| complementary(k, s[0], s[1]))
}

/// Chance that five uniform answers are non-strictly ordered one way.
pub fn exact_monotonicity_chance(k: usize) -> f64 {
    share(k, ConfidencePoint::ALL.len(), |s| monotone(s, Direction::Decreasing))
}

pub fn exact_empirical_chance(k: usize) -> f64 {
    share(k, 1, |s| s[0] == 0)
}

/// Chance that a uniform answer pair moves with sign `ground_truth_sign`.
pub fn exact_empirical_monotonicity_chance(k: usize, ground_truth_sign: i8) -> f64 {
    share(k, 2, |s| sign(s[0], s[1]) == ground_truth_sign)
}

/// Expected score (percentage) of uniform answers on an all-`k` corpus.
/// Empirical monotonicity depends on the ground truth and is averaged over
/// the shipped corpus layout by [`random_baseline`] instead.
pub fn exact_baseline(metric: Metric, k: usize) -> Option<f64> {
    match metric {
        Metric::Pairwise => Some(100.0 * exact_pairwise_chance(k)),
        Metric::Monotonicity => Some(100.0 * exact_monotonicity_chance(k)),
        Metric::Empirical => Some(100.0 * exact_empirical_chance(k)),
        Metric::EmpiricalMonotonicity => None,
    }
}

// -- corpus layout -------------------------------------------------------

#[derive(Debug, Clone)]
struct Unit {
    id: String,
    members: Vec<usize>,
    scenario: Scenario,
    choice_set: ChoiceSetId,
    numbers: NumbersId,
    k: usize,
    chance: f64,
    check: Check,
}

#[derive(Debug, Clone, Copy)]
enum Check {
    Complementary,
    Monotone(Direction),
    Equals(usize),
    Sign(i8),
}

impl Unit {
    fn verdict(&self, ranks: &[Option<usize>]) -> u8 {
        let got: Option<Vec<usize>> = self.members.iter().map(|&i| ranks[i]).collect();
        let Some(got) = got else { return 0 };
        let pass = match self.check {
            Check::Complementary => complementary(self.k, got[0], got[1]),
            Check::Monotone(direction) => monotone(&got, direction),
            Check::Equals(truth) => got[0] == truth,
            Check::Sign(s) => sign(got[0], got[1]) == s,
        };
        pass as u8
    }
}

type SequenceKey = (Scenario, ChoiceSetId, NumbersId, IntervalKind);

/// Index of a complete corpus for one mode.
struct Layout<'a> {
    prompts: Vec<&'a PromptRecord>,
    mode: Mode,
    sequences: BTreeMap<SequenceKey, [usize; 5]>,
}

impl<'a> Layout<'a> {
    fn new(prompts: &'a [PromptRecord]) -> Result<Self> {
        let first = prompts
            .first()
            .ok_or_else(|| Error::IncompleteCoverage(vec!["<empty corpus>".into()]))?;
        let mode = first.mode;
        let mut slots: HashMap<(SequenceKey, usize), usize> = HashMap::new();
        let mut dupes = Vec::new();
        for (i, p) in prompts.iter().enumerate() {
            let r = rq2(p)?;
            if p.mode != mode {
                return Err(Error::Validation(format!(
                    "corpus mixes {} and {} prompts; score each mode separately",
                    mode, p.mode
                )));
            }
            let key = ((r.scenario, r.choice_set, r.numbers, r.interval), r.level.index());
            if slots.insert(key, i).is_some() {
                dupes.push(p.id.clone());
            }
        }
        if !dupes.is_empty() {
            return Err(Error::Validation(format!("duplicate provenance for {}", dupes.join(", "))));
        }
        let mut sequences = BTreeMap::new();
        let mut missing = Vec::new();
        for scenario in Scenario::ALL {
            for choice_set in ChoiceSetId::ALL {
                for numbers in NumbersId::ALL {
                    for kind in IntervalKind::ALL {
                        let key = (scenario, choice_set, numbers, kind);
                        let mut seq = [0usize; 5];
                        for level in ConfidencePoint::ALL {
                            match slots.get(&(key, level.index())) {
                                Some(&i) => seq[level.index()] = i,
                                None => missing.push(format!(
                                    "{scenario}/{choice_set}/{numbers}/{level}/{kind}"
                                )),
                            }
                        }
                        sequences.insert(key, seq);
                    }
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteCoverage(missing));
        }
        Ok(Layout {
            prompts: prompts.iter().collect(),
            mode,
            sequences,
        })
    }

    fn provenance(&self, i: usize) -> &Rq2Provenance {
        self.prompts[i].rq2().expect("checked in Layout::new")
    }

    fn units(&self, metric: Metric) -> Vec<Unit> {
        let mut out = Vec::with_capacity(metric.expected_units());
        for (&(scenario, choice_set, numbers, kind), seq) in &self.sequences {
            let k = choice_set.set().len();
            let unit = |id: String, members: Vec<usize>, chance: f64, check: Check| Unit {
                id,
                members,
                scenario,
                choice_set,
                numbers,
                k,
                chance,
                check,
            };
            let stem = format!("{scenario}-{choice_set}-{numbers}");
            match metric {
                Metric::Pairwise => {
                    // one unit per pair, owned by the first member of the pair
                    if kind != IntervalKind::ALL[2 * kind.pair_index()] {
                        continue;
                    }
                    let other = &self.sequences[&(scenario, choice_set, numbers, kind.complement())];
                    for level in ConfidencePoint::ALL {
                        let l = level.index();
                        out.push(unit(
                            format!("{stem}-{level}-pair{}", kind.pair_index()),
                            vec![seq[l], other[l]],
                            exact_pairwise_chance(k),
                            Check::Complementary,
                        ));
                    }
                }
                Metric::Monotonicity => out.push(unit(
                    format!("{stem}-{kind}"),
                    seq.to_vec(),
                    exact_monotonicity_chance(k),
                    Check::Monotone(kind.direction_under_widening()),
                )),
                Metric::Empirical => {
                    for level in ConfidencePoint::ALL {
                        let i = seq[level.index()];
                        out.push(unit(
                            format!("{stem}-{level}-{kind}"),
                            vec![i],
                            exact_empirical_chance(k),
                            Check::Equals(ground_truth_rank(self.provenance(i))),
                        ));
                    }
                }
                Metric::EmpiricalMonotonicity => {
                    for w in seq.windows(2) {
                        let (a, b) = (self.provenance(w[0]), self.provenance(w[1]));
                        let s = sign(ground_truth_rank(a), ground_truth_rank(b));
                        out.push(unit(
                            format!("{stem}-{kind}-{}to{}", a.level, b.level),
                            w.to_vec(),
                            exact_empirical_monotonicity_chance(k, s),
                            Check::Sign(s),
                        ));
                    }
                }
            }
        }
        out
    }
}

fn rank_of(prompt: &PromptRecord, parsed: &Parsed) -> Option<usize> {
    let Parsed::Choice { label, phrase } = parsed else { return None };
    let set = prompt.rq2()?.choice_set.set();
    set.rank_of_label(*label).filter(|&r| set.choices[r].phrase == phrase)
}

fn align(layout: &Layout, responses: &[ResponseRecord]) -> Result<Vec<Option<usize>>> {
    let mut by_id: HashMap<&str, &ResponseRecord> = HashMap::new();
    for r in responses {
        if by_id.insert(r.prompt_id.as_str(), r).is_some() {
            return Err(Error::Validation(format!("two responses for prompt {}", r.prompt_id)));
        }
    }
    let mut missing = Vec::new();
    let ranks = layout
        .prompts
        .iter()
        .map(|p| match by_id.get(p.id.as_str()) {
            Some(r) => rank_of(p, &r.parsed),
            None => {
                missing.push(p.id.clone());
                None
            }
        })
        .collect();
    if missing.is_empty() {
        Ok(ranks)
    } else {
        Err(Error::IncompleteCoverage(missing))
    }
}

fn percent(verdicts: impl Iterator<Item = f64>) -> (f64, usize) {
    let (sum, n) = verdicts.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (if n == 0 { 0.0 } else { 100.0 * sum / n as f64 }, n)
}

fn build_report(metric: Metric, mode: Mode, units: &[Unit], ranks: &[Option<usize>]) -> MetricReport {
    let items: Vec<UnitVerdict> = units
        .iter()
        .map(|u| UnitVerdict {
            unit_id: u.id.clone(),
            verdict: u.verdict(ranks),
            scenario: u.scenario,
            choice_set: u.choice_set,
            numbers: u.numbers,
            chance: u.chance,
        })
        .collect();
    let (score, n_units) = percent(items.iter().map(|i| i.verdict as f64));
    let (baseline, _) = percent(items.iter().map(|i| i.chance));

    let mut strata = Vec::new();
    let mut push = |axis: &str, value: &str, filter: &dyn Fn(&UnitVerdict) -> bool| {
        let (score, n_units) = percent(items.iter().filter(|i| filter(i)).map(|i| i.verdict as f64));
        let (baseline, _) = percent(items.iter().filter(|i| filter(i)).map(|i| i.chance));
        strata.push(Stratum {
            axis: axis.into(),
            value: value.into(),
            n_units,
            score,
            baseline,
        });
    };
    for s in Scenario::ALL {
        push("scenario", s.as_str(), &|i| i.scenario == s);
    }
    for c in ChoiceSetId::ALL {
        push("choice_set", c.as_str(), &|i| i.choice_set == c);
    }
    for n in NumbersId::ALL {
        push("numbers", n.as_str(), &|i| i.numbers == n);
    }

    MetricReport {
        metric,
        mode,
        score,
        n_units,
        baseline,
        baseline_montecarlo: None,
        strata,
        items,
    }
}

/// Scores one metric. `prompts` must be a complete corpus for one mode and
/// every prompt needs exactly one response; extra responses are ignored.
pub fn score_metric(metric: Metric, prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Result<MetricReport> {
    let layout = Layout::new(prompts)?;
    let ranks = align(&layout, responses)?;
    Ok(build_report(metric, layout.mode, &layout.units(metric), &ranks))
}

pub fn score_all(prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Result<Vec<MetricReport>> {
    let layout = Layout::new(prompts)?;
    let ranks = align(&layout, responses)?;
    Ok(Metric::ALL
        .iter()
        .map(|&m| build_report(m, layout.mode, &layout.units(m), &ranks))
        .collect())
}

pub fn pairwise_consistency(prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Result<MetricReport> {
    score_metric(Metric::Pairwise, prompts, responses)
}

pub fn monotonicity_consistency(prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Result<MetricReport> {
    score_metric(Metric::Monotonicity, prompts, responses)
}

pub fn empirical_consistency(prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Result<MetricReport> {
    score_metric(Metric::Empirical, prompts, responses)
}

pub fn empirical_monotonicity_consistency(
    prompts: &[PromptRecord],
    responses: &[ResponseRecord],
) -> Result<MetricReport> {
    score_metric(Metric::EmpiricalMonotonicity, prompts, responses)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    Exact,
    /// Mean over `replications` runs of uniformly random answers.
    MonteCarlo { replications: usize, seed: u64 },
}

impl BaselineMethod {
    pub const DEFAULT_REPLICATIONS: usize = 10;
    pub const DEFAULT_SEED: u64 = 2024;

    pub fn monte_carlo() -> Self {
        BaselineMethod::MonteCarlo {
            replications: Self::DEFAULT_REPLICATIONS,
            seed: Self::DEFAULT_SEED,
        }
    }
}

/// Expected score of uniform answers over the corpus's units, optionally
/// restricted to one choice set. The standard error of a Monte-Carlo
/// estimate is the analytic one, from the exact per-unit chances.
pub fn random_baseline(
    metric: Metric,
    prompts: &[PromptRecord],
    choice_set: Option<ChoiceSetId>,
    method: BaselineMethod,
) -> Result<BaselineEstimate> {
    let layout = Layout::new(prompts)?;
    let units: Vec<Unit> = layout
        .units(metric)
        .into_iter()
        .filter(|u| choice_set.is_none_or(|c| u.choice_set == c))
        .collect();
    let n = units.len() as f64;
    let (exact, _) = percent(units.iter().map(|u| u.chance));
    match method {
        BaselineMethod::Exact => Ok(BaselineEstimate {
            value: exact,
            standard_error: 0.0,
        }),
        BaselineMethod::MonteCarlo { replications, seed } => {
            if replications == 0 {
                return Err(Error::InvalidConfig("Monte-Carlo baseline needs replications".into()));
            }
            let mut total = 0.0;
            for rep in 0..replications {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(rep as u64);
                let ranks: Vec<Option<usize>> = layout
                    .prompts
                    .iter()
                    .map(|p| Some(rng.random_range(0..p.rq2().expect("rq2").choice_set.set().len())))
                    .collect();
                let (score, _) = percent(units.iter().map(|u| u.verdict(&ranks) as f64));
                total += score;
            }
            let variance: f64 = units.iter().map(|u| u.chance * (1.0 - u.chance)).sum();
            Ok(BaselineEstimate {
                value: total / replications as f64,
                standard_error: 100.0 * variance.sqrt() / n / (replications as f64).sqrt(),
            })
        }
    }
}

/// Exact and Monte-Carlo baselines for every metric and choice set.
pub fn baseline_table(prompts: &[PromptRecord], method: BaselineMethod) -> Result<Vec<(Metric, ChoiceSetId, BaselineEstimate)>> {
    let mut out = Vec::new();
    for metric in Metric::ALL {
        for cs in ChoiceSetId::ALL {
            out.push((metric, cs, random_baseline(metric, prompts, Some(cs), method)?));
        }
    }
    Ok(out)
}

/// Identifiers of the prompts a response set is missing.
pub fn missing_prompts(prompts: &[PromptRecord], responses: &[ResponseRecord]) -> Vec<String> {
    let have: HashSet<&str> = responses.iter().map(|r| r.prompt_id.as_str()).collect();
    prompts
        .iter()
        .filter(|p| !have.contains(p.id.as_str()))
        .map(|p| p.id.clone())
        .collect()
}

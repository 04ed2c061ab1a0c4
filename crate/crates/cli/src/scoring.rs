//! Metric scores across modes, paired t-tests between modes and between
//! choice sets, and the figures drawn from them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use wepbench_core::domain::{ChoiceSetId, Mode, PromptRecord, ResponseRecord, Scenario};
use wepbench_core::metrics::{random_baseline, score_all, BaselineMethod, Metric, MetricReport};
use wepbench_core::stats::{paired_t_test, significance_stars};

use crate::error::{CliError, CliResult};
use crate::svg::{bar_chart, Bar, BarGroup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    /// `standard vs cot` or `five_choices vs three_choices`.
    pub comparison: String,
    pub metric: Metric,
    /// `all`, a scenario, or the mode a choice-set test ran in.
    pub stratum: String,
    pub n: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub t: Option<f64>,
    pub p_value: Option<f64>,
    pub cohens_d: Option<f64>,
    pub stars: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub reports: Vec<MetricReport>,
    pub tests: Vec<PairedTest>,
    pub baseline_replications: usize,
    pub baseline_seed: u64,
}

impl ScoreSummary {
    pub fn report(&self, metric: Metric, mode: Mode) -> Option<&MetricReport> {
        self.reports.iter().find(|r| r.metric == metric && r.mode == mode)
    }

    pub fn modes(&self) -> Vec<Mode> {
        let mut modes: Vec<Mode> = self.reports.iter().map(|r| r.mode).collect();
        modes.sort();
        modes.dedup();
        modes
    }

    pub fn test(&self, comparison: &str, metric: Metric, stratum: &str) -> Option<&PairedTest> {
        self.tests
            .iter()
            .find(|t| t.comparison == comparison && t.metric == metric && t.stratum == stratum)
    }
}

pub const MODE_COMPARISON: &str = "standard vs cot";
pub const CHOICE_SET_COMPARISON: &str = "five_choices vs three_choices";

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn paired(comparison: &str, metric: Metric, stratum: &str, x: &[f64], y: &[f64]) -> PairedTest {
    let mut test = PairedTest {
        comparison: comparison.into(),
        metric,
        stratum: stratum.into(),
        n: x.len(),
        mean_a: 100.0 * mean(x),
        mean_b: 100.0 * mean(y),
        t: None,
        p_value: None,
        cohens_d: None,
        stars: String::new(),
        note: None,
    };
    match paired_t_test(x, y) {
        Ok(r) => {
            test.t = Some(r.statistic);
            test.p_value = Some(r.p_value);
            test.cohens_d = Some(r.effect_size);
            test.stars = significance_stars(r.p_value).into();
        }
        Err(e) => test.note = Some(e.to_string()),
    }
    test
}

fn mode_tests(standard: &MetricReport, cot: &MetricReport) -> Vec<PairedTest> {
    let by_id: HashMap<&str, _> = cot.items.iter().map(|i| (i.unit_id.as_str(), i)).collect();
    let pairs: Vec<_> = standard
        .items
        .iter()
        .filter_map(|s| by_id.get(s.unit_id.as_str()).map(|c| (s, *c)))
        .collect();
    let mut out = Vec::new();
    let mut strata: Vec<(String, Option<Scenario>)> = vec![("all".into(), None)];
    strata.extend(Scenario::ALL.iter().map(|s| (s.as_str().to_string(), Some(*s))));
    for (name, scenario) in strata {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs
            .iter()
            .filter(|(s, _)| scenario.is_none_or(|sc| s.scenario == sc))
            .map(|(s, c)| (s.verdict as f64, c.verdict as f64))
            .unzip();
        out.push(paired(MODE_COMPARISON, standard.metric, &name, &x, &y));
    }
    out
}

fn choice_set_test(report: &MetricReport) -> PairedTest {
    let five = ChoiceSetId::FiveChoices.as_str();
    let three = ChoiceSetId::ThreeChoices.as_str();
    let by_id: HashMap<&str, _> = report.items.iter().map(|i| (i.unit_id.as_str(), i)).collect();
    let (x, y): (Vec<f64>, Vec<f64>) = report
        .items
        .iter()
        .filter(|i| i.choice_set == ChoiceSetId::FiveChoices)
        .filter_map(|i| {
            by_id
                .get(i.unit_id.replace(five, three).as_str())
                .map(|o| (i.verdict as f64, o.verdict as f64))
        })
        .unzip();
    paired(CHOICE_SET_COMPARISON, report.metric, report.mode.as_str(), &x, &y)
}

/// Scores each (corpus, responses) run, one run per mode.
pub fn summarize(runs: &[(Vec<PromptRecord>, Vec<ResponseRecord>)], replications: usize, seed: u64) -> CliResult<ScoreSummary> {
    let method = BaselineMethod::MonteCarlo { replications, seed };
    let mut reports: Vec<MetricReport> = Vec::new();
    for (prompts, responses) in runs {
        let scored = score_all(prompts, responses)?;
        if let Some(dup) = scored.first().filter(|r| reports.iter().any(|p| p.mode == r.mode)) {
            return Err(CliError::Usage(format!("two corpora in {} mode; pass one per mode", dup.mode)));
        }
        for mut report in scored {
            report.baseline_montecarlo = Some(random_baseline(report.metric, prompts, None, method)?);
            reports.push(report);
        }
    }

    let mut tests = Vec::new();
    for metric in Metric::ALL {
        let find = |mode| reports.iter().find(|r| r.metric == metric && r.mode == mode);
        if let (Some(s), Some(c)) = (find(Mode::Standard), find(Mode::Cot)) {
            tests.extend(mode_tests(s, c));
        }
    }
    for report in &reports {
        tests.push(choice_set_test(report));
    }
    Ok(ScoreSummary {
        reports,
        tests,
        baseline_replications: replications,
        baseline_seed: seed,
    })
}

/// Flat table: one row per report and stratum.
pub fn write_scores_csv<W: std::io::Write>(summary: &ScoreSummary, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mode", "metric", "axis", "value", "n_units", "score", "baseline", "baseline_mc", "baseline_mc_se"])?;
    for r in &summary.reports {
        let (mc, se) = r
            .baseline_montecarlo
            .as_ref()
            .map(|b| (format!("{:.4}", b.value), format!("{:.4}", b.standard_error)))
            .unwrap_or_default();
        w.write_record([
            r.mode.as_str(),
            r.metric.as_str(),
            "all",
            "all",
            &r.n_units.to_string(),
            &format!("{:.4}", r.score),
            &format!("{:.4}", r.baseline),
            &mc,
            &se,
        ])?;
        for s in &r.strata {
            w.write_record([
                r.mode.as_str(),
                r.metric.as_str(),
                &s.axis,
                &s.value,
                &s.n_units.to_string(),
                &format!("{:.4}", s.score),
                &format!("{:.4}", s.baseline),
                "",
                "",
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_tests_csv<W: std::io::Write>(summary: &ScoreSummary, out: W) -> csv::Result<()> {
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["comparison", "metric", "stratum", "n", "mean_a", "mean_b", "t", "p_value", "cohens_d", "stars", "note"])?;
    for t in &summary.tests {
        w.write_record([
            t.comparison.as_str(),
            t.metric.as_str(),
            &t.stratum,
            &t.n.to_string(),
            &format!("{:.4}", t.mean_a),
            &format!("{:.4}", t.mean_b),
            &opt(t.t),
            &opt(t.p_value),
            &opt(t.cohens_d),
            &t.stars,
            t.note.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn stratum_bar(report: &MetricReport, axis: &str, value: &str) -> Option<Bar> {
    if axis == "all" {
        return Some(Bar { value: report.score, baseline: Some(report.baseline) });
    }
    report
        .strata
        .iter()
        .find(|s| s.axis == axis && s.value == value)
        .map(|s| Bar { value: s.score, baseline: Some(s.baseline) })
}

/// Scores per metric and scenario with one bar per mode.
pub fn modes_figure(summary: &ScoreSummary) -> String {
    let modes = summary.modes();
    let series: Vec<String> = modes.iter().map(|m| m.as_str().to_string()).collect();
    let mut groups = Vec::new();
    for metric in Metric::ALL {
        let strata = std::iter::once(("all", "all")).chain(Scenario::ALL.iter().map(|s| ("scenario", s.as_str())));
        for (axis, value) in strata {
            let bars = modes
                .iter()
                .map(|&m| summary.report(metric, m).and_then(|r| stratum_bar(r, axis, value)))
                .collect();
            let stars = summary
                .test(MODE_COMPARISON, metric, value)
                .map(|t| t.stars.clone())
                .unwrap_or_default();
            groups.push(BarGroup {
                label: format!("{metric} / {value}"),
                bars,
                stars,
            });
        }
    }
    bar_chart("Consistency by metric and scenario", "score (%)", &series, &groups)
}

/// Scores per metric and mode with one bar per choice set.
pub fn choice_sets_figure(summary: &ScoreSummary) -> String {
    let series: Vec<String> = ChoiceSetId::ALL.iter().map(|c| c.as_str().to_string()).collect();
    let mut groups = Vec::new();
    for mode in summary.modes() {
        for metric in Metric::ALL {
            let Some(report) = summary.report(metric, mode) else { continue };
            let bars = ChoiceSetId::ALL
                .iter()
                .map(|c| stratum_bar(report, "choice_set", c.as_str()))
                .collect();
            let stars = summary
                .test(CHOICE_SET_COMPARISON, metric, mode.as_str())
                .map(|t| t.stars.clone())
                .unwrap_or_default();
            groups.push(BarGroup {
                label: format!("{metric} / {mode}"),
                bars,
                stars,
            });
        }
    }
    bar_chart("Consistency by choice set", "score (%)", &series, &groups)
}

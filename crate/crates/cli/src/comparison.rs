//! Per-WEP comparison of probability distributions between sources: the
//! survey and any number of model response sets.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use wepbench_core::domain::{wep_registry, PromptRecord, ResponseRecord};
use wepbench_core::stats::{
    bin_distribution, kl_divergence, ks_statistic, mann_whitney_u_with, median_and_amd, rank_biserial_ci,
    significance_stars, BootstrapConfig, MwuMethod, BIN_COUNT, EXACT_LIMIT, KL_EPSILON,
};
use wepbench_core::survey::SurveyTable;

use crate::error::{CliError, CliResult};
use crate::svg::{box_plot, heat_map, HeatCell};

/// Percentages per canonical WEP for one respondent population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub label: String,
    pub distributions: BTreeMap<String, Vec<f64>>,
    /// Replies that did not yield a probability.
    #[serde(default)]
    pub unparsed: usize,
}

impl Source {
    pub fn values(&self, wep: &str) -> &[f64] {
        self.distributions.get(wep).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub const SURVEY_LABEL: &str = "human";

pub fn survey_source(table: &SurveyTable) -> CliResult<Source> {
    let mut distributions = BTreeMap::new();
    for wep in wep_registry() {
        // a WEP the survey never asked about shows up as flagged rows
        match table.wep_distribution(wep.canonical_name) {
            Ok(values) => {
                distributions.insert(wep.canonical_name.to_string(), values);
            }
            Err(wepbench_core::Error::EmptySample(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Source {
        label: SURVEY_LABEL.into(),
        distributions,
        unparsed: 0,
    })
}

/// Groups parsed RQ1 answers by WEP, optionally splitting the source by
/// setting and by language.
pub fn response_sources(
    label: &str,
    prompts: &HashMap<String, PromptRecord>,
    responses: &[ResponseRecord],
    split_setting: bool,
    split_language: bool,
) -> CliResult<Vec<Source>> {
    let mut sources: BTreeMap<String, Source> = BTreeMap::new();
    for r in responses {
        let prompt = prompts
            .get(&r.prompt_id)
            .ok_or_else(|| CliError::Data(format!("{label}: response for unknown prompt {}", r.prompt_id)))?;
        let rq1 = prompt
            .rq1()
            .ok_or_else(|| CliError::Data(format!("{label}: {} is not an RQ1 prompt", r.prompt_id)))?;
        let mut name = label.to_string();
        if split_setting {
            name = format!("{name}/{}", rq1.setting);
        }
        if split_language {
            name = format!("{name}/{}", prompt.language.code());
        }
        let source = sources.entry(name.clone()).or_insert_with(|| Source {
            label: name,
            distributions: BTreeMap::new(),
            unparsed: 0,
        });
        match r.parsed.percentage() {
            Some(v) => source.distributions.entry(rq1.wep.clone()).or_default().push(v),
            None => source.unparsed += 1,
        }
    }
    Ok(sources.into_values().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub a: String,
    pub b: String,
    pub wep: String,
    pub n_a: usize,
    pub n_b: usize,
    pub median_a: Option<f64>,
    pub median_b: Option<f64>,
    pub amd: Option<f64>,
    pub u: Option<f64>,
    pub p_value: Option<f64>,
    /// Positive when `a` tends to give higher probabilities than `b`.
    pub rank_biserial: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub ks: Option<f64>,
    /// KL(a || b) in nats.
    pub kl: Option<f64>,
    pub stars: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub bootstrap: BootstrapConfig,
    pub method: MwuMethod,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            bootstrap: BootstrapConfig::default(),
            method: MwuMethod::Normal,
        }
    }
}

pub fn compare_wep(a: &Source, b: &Source, wep: &str, opts: &CompareOptions) -> CliResult<ComparisonRow> {
    let (xa, xb) = (a.values(wep), b.values(wep));
    let mut row = ComparisonRow {
        a: a.label.clone(),
        b: b.label.clone(),
        wep: wep.into(),
        n_a: xa.len(),
        n_b: xb.len(),
        median_a: None,
        median_b: None,
        amd: None,
        u: None,
        p_value: None,
        rank_biserial: None,
        ci_low: None,
        ci_high: None,
        ks: None,
        kl: None,
        stars: String::new(),
        flag: None,
    };
    let empty: Vec<&str> = [(a, xa), (b, xb)]
        .iter()
        .filter(|(_, x)| x.is_empty())
        .map(|(s, _)| s.label.as_str())
        .collect();
    if !empty.is_empty() {
        row.flag = Some(format!("no parsed responses from {}", empty.join(" and ")));
        return Ok(row);
    }
    let (ma, mb, amd) = median_and_amd(xa, xb)?;
    let method = match opts.method {
        MwuMethod::Exact if xa.len() * xb.len() > EXACT_LIMIT => MwuMethod::Normal,
        m => m,
    };
    let mwu = mann_whitney_u_with(xa, xb, method)?;
    let (lo, hi) = rank_biserial_ci(xa, xb, opts.bootstrap)?;
    let kl = kl_divergence(&bin_distribution(xa)?, &bin_distribution(xb)?);
    row.median_a = Some(ma);
    row.median_b = Some(mb);
    row.amd = Some(amd);
    row.u = Some(mwu.statistic);
    row.p_value = Some(mwu.p_value);
    row.rank_biserial = Some(mwu.effect_size);
    row.ci_low = Some(lo);
    row.ci_high = Some(hi);
    row.ks = Some(ks_statistic(xa, xb));
    row.kl = Some(kl);
    row.stars = significance_stars(mwu.p_value).into();
    Ok(row)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub kl_units: String,
    pub kl_bins: usize,
    pub kl_epsilon: f64,
    pub p_method: String,
    pub ci_method: String,
    pub ci_resamples: usize,
    pub ci_seed: u64,
    pub sources: Vec<Source>,
    pub rows: Vec<ComparisonRow>,
}

/// Every unordered pair of sources, in source order, for every WEP.
pub fn compare_all(sources: Vec<Source>, opts: &CompareOptions) -> CliResult<ComparisonReport> {
    let mut rows = Vec::new();
    for i in 0..sources.len() {
        for j in i + 1..sources.len() {
            for wep in wep_registry() {
                rows.push(compare_wep(&sources[i], &sources[j], wep.canonical_name, opts)?);
            }
        }
    }
    Ok(ComparisonReport {
        kl_units: "nats".into(),
        kl_bins: BIN_COUNT,
        kl_epsilon: KL_EPSILON,
        p_method: match opts.method {
            MwuMethod::Normal => "normal approximation with tie and continuity corrections".into(),
            MwuMethod::Exact => format!("exact when n1*n2 <= {EXACT_LIMIT}, otherwise normal approximation"),
        },
        ci_method: format!("percentile bootstrap, level {}", opts.bootstrap.level),
        ci_resamples: opts.bootstrap.resamples,
        ci_seed: opts.bootstrap.seed,
        sources,
        rows,
    })
}

pub fn write_rows_csv<W: std::io::Write>(report: &ComparisonReport, out: W) -> csv::Result<()> {
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "a", "b", "wep", "n_a", "n_b", "median_a", "median_b", "amd", "u", "p_value", "rank_biserial", "ci_low",
        "ci_high", "ks", "kl", "stars", "flag",
    ])?;
    for r in &report.rows {
        w.write_record([
            r.a.as_str(),
            &r.b,
            &r.wep,
            &r.n_a.to_string(),
            &r.n_b.to_string(),
            &opt(r.median_a),
            &opt(r.median_b),
            &opt(r.amd),
            &opt(r.u),
            &opt(r.p_value),
            &opt(r.rank_biserial),
            &opt(r.ci_low),
            &opt(r.ci_high),
            &opt(r.ks),
            &opt(r.kl),
            &r.stars,
            r.flag.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn wep_names() -> Vec<String> {
    wep_registry().iter().map(|w| w.canonical_name.to_string()).collect()
}

pub fn kl_figure(report: &ComparisonReport) -> String {
    let mut columns: Vec<String> = Vec::new();
    for r in &report.rows {
        let c = format!("{} vs {}", r.a, r.b);
        if !columns.contains(&c) {
            columns.push(c);
        }
    }
    let rows = wep_names();
    let cells: Vec<Vec<HeatCell>> = rows
        .iter()
        .map(|wep| {
            columns
                .iter()
                .map(|c| {
                    report
                        .rows
                        .iter()
                        .find(|r| &r.wep == wep && format!("{} vs {}", r.a, r.b) == *c)
                        .map(|r| HeatCell { value: r.kl, p_value: r.p_value })
                        .unwrap_or(HeatCell { value: None, p_value: None })
                })
                .collect()
        })
        .collect();
    heat_map("KL divergence per WEP (nats)", &rows, &columns, &cells)
}

pub fn distributions_figure(sources: &[Source]) -> String {
    let series: Vec<String> = sources.iter().map(|s| s.label.clone()).collect();
    let categories = wep_names();
    let data: Vec<Vec<Vec<f64>>> = categories
        .iter()
        .map(|wep| sources.iter().map(|s| s.values(wep).to_vec()).collect())
        .collect();
    box_plot("Probability assigned to each WEP", "probability (%)", &series, &categories, &data)
}

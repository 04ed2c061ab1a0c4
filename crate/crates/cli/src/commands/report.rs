//! Rebuilds every figure from the JSON tables and writes a Markdown summary.

use std::fmt::Write;

use serde::Serialize;
use wepbench_core::metrics::Metric;

use super::{read_json, write_json, write_text, COMPARISON_JSON, FIG_CHOICE_SETS, FIG_DISTRIBUTIONS, FIG_KL, FIG_MODES, SCORES_JSON};
use crate::args::ReportArgs;
use crate::comparison::{distributions_figure, kl_figure, ComparisonReport};
use crate::error::{CliError, CliResult};
use crate::scoring::{choice_sets_figure, modes_figure, ScoreSummary, CHOICE_SET_COMPARISON, MODE_COMPARISON};

#[derive(Debug, Serialize)]
struct Manifest {
    figures: Vec<String>,
    tables: Vec<String>,
    summary: String,
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map(|v| format!("{v:.digits$}")).unwrap_or_else(|| "n/a".into())
}

fn scores_section(md: &mut String, s: &ScoreSummary) {
    let _ = writeln!(md, "## Consistency scores\n");
    let _ = writeln!(md, "| mode | metric | units | score | random (exact) | random (simulated) |");
    let _ = writeln!(md, "|---|---|---:|---:|---:|---:|");
    for r in &s.reports {
        let mc = r
            .baseline_montecarlo
            .as_ref()
            .map(|b| format!("{:.2} ± {:.2}", b.value, b.standard_error))
            .unwrap_or_else(|| "n/a".into());
        let _ = writeln!(md, "| {} | {} | {} | {:.2} | {:.2} | {mc} |", r.mode, r.metric, r.n_units, r.score, r.baseline);
    }
    let _ = writeln!(md, "\n## Paired t-tests\n");
    let _ = writeln!(md, "| comparison | metric | stratum | n | mean a | mean b | t | p | d | |");
    let _ = writeln!(md, "|---|---|---|---:|---:|---:|---:|---:|---:|---|");
    for comparison in [MODE_COMPARISON, CHOICE_SET_COMPARISON] {
        for metric in Metric::ALL {
            for t in s.tests.iter().filter(|t| t.comparison == comparison && t.metric == metric) {
                let _ = writeln!(
                    md,
                    "| {} | {} | {} | {} | {:.2} | {:.2} | {} | {} | {} | {} |",
                    t.comparison,
                    t.metric,
                    t.stratum,
                    t.n,
                    t.mean_a,
                    t.mean_b,
                    opt(t.t, 2),
                    opt(t.p_value, 4),
                    opt(t.cohens_d, 3),
                    t.note.as_deref().unwrap_or(&t.stars)
                );
            }
        }
    }
    let _ = writeln!(md, "\n![scores by mode]({FIG_MODES})\n\n![scores by choice set]({FIG_CHOICE_SETS})\n");
}

fn comparison_section(md: &mut String, c: &ComparisonReport) {
    let _ = writeln!(md, "## Distribution comparisons\n");
    let _ = writeln!(
        md,
        "KL divergence in {} over {} bins (smoothing {}); p from {}; rank-biserial interval by {} ({} resamples, seed {}).\n",
        c.kl_units, c.kl_bins, c.kl_epsilon, c.p_method, c.ci_method, c.ci_resamples, c.ci_seed
    );
    let _ = writeln!(md, "| a | b | WEP | n a | n b | median a | median b | AMD | U | p | r [CI] | KS | KL | |");
    let _ = writeln!(md, "|---|---|---|---:|---:|---:|---:|---:|---:|---:|---|---:|---:|---|");
    for r in &c.rows {
        let ci = match (r.rank_biserial, r.ci_low, r.ci_high) {
            (Some(e), Some(lo), Some(hi)) => format!("{e:.2} [{lo:.2}, {hi:.2}]"),
            _ => "n/a".into(),
        };
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {ci} | {} | {} | {} |",
            r.a,
            r.b,
            r.wep,
            r.n_a,
            r.n_b,
            opt(r.median_a, 1),
            opt(r.median_b, 1),
            opt(r.amd, 1),
            opt(r.u, 1),
            opt(r.p_value, 4),
            opt(r.ks, 3),
            opt(r.kl, 3),
            r.flag.as_deref().unwrap_or(&r.stars)
        );
    }
    let _ = writeln!(md, "\n![distributions]({FIG_DISTRIBUTIONS})\n\n![KL heat map]({FIG_KL})\n");
}

pub fn report(args: &ReportArgs) -> CliResult<String> {
    let dir = &args.dir;
    let scores_path = dir.join(SCORES_JSON);
    let comparison_path = dir.join(COMPARISON_JSON);
    if !scores_path.exists() && !comparison_path.exists() {
        return Err(CliError::Data(format!(
            "{} holds neither {SCORES_JSON} nor {COMPARISON_JSON}; run score or compare first",
            dir.display()
        )));
    }

    let mut manifest = Manifest {
        figures: Vec::new(),
        tables: Vec::new(),
        summary: "report.md".into(),
    };
    let mut md = String::from("# Benchmark report\n\nStars mark p < 0.10 (*), p < 0.05 (**) and p < 0.01 (***).\n\n");
    if scores_path.exists() {
        let s: ScoreSummary = read_json(&scores_path)?;
        write_text(&dir.join(FIG_MODES), &modes_figure(&s))?;
        write_text(&dir.join(FIG_CHOICE_SETS), &choice_sets_figure(&s))?;
        manifest.figures.extend([FIG_MODES.into(), FIG_CHOICE_SETS.into()]);
        manifest.tables.extend([SCORES_JSON.into(), "scores.csv".into(), "tests.csv".into()]);
        scores_section(&mut md, &s);
    }
    if comparison_path.exists() {
        let c: ComparisonReport = read_json(&comparison_path)?;
        write_text(&dir.join(FIG_DISTRIBUTIONS), &distributions_figure(&c.sources))?;
        write_text(&dir.join(FIG_KL), &kl_figure(&c))?;
        manifest.figures.extend([FIG_DISTRIBUTIONS.into(), FIG_KL.into()]);
        manifest.tables.extend([COMPARISON_JSON.into(), "comparison.csv".into()]);
        comparison_section(&mut md, &c);
    }
    write_text(&dir.join("report.md"), &md)?;
    write_json(&dir.join("report.json"), &manifest)?;
    Ok(format!(
        "wrote report.md and {} figures to {}",
        manifest.figures.len(),
        dir.display()
    ))
}

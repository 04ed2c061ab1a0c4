use std::collections::HashMap;
use std::fmt::Write;
use std::path::PathBuf;

use wepbench_core::stats::{BootstrapConfig, MwuMethod};
use wepbench_core::survey::{load_survey, load_survey_wide};

use super::{create, ensure_dir, read_corpus, read_responses, write_json, write_text, COMPARISON_JSON, FIG_DISTRIBUTIONS, FIG_KL};
use crate::args::CompareArgs;
use crate::comparison::{compare_all, distributions_figure, kl_figure, response_sources, survey_source, write_rows_csv, CompareOptions};
use crate::error::{CliError, CliResult};

fn labelled(spec: &str) -> (String, PathBuf) {
    match spec.split_once('=') {
        Some((label, path)) if !label.is_empty() => (label.to_string(), PathBuf::from(path)),
        _ => {
            let path = PathBuf::from(spec);
            let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.into());
            (label, path)
        }
    }
}

pub fn compare(args: &CompareArgs) -> CliResult<String> {
    let mut sources = Vec::new();
    if let Some(path) = &args.survey {
        let table = if args.survey_wide { load_survey_wide(path)? } else { load_survey(path)? };
        sources.push(survey_source(&table)?);
    } else if args.survey_wide {
        return Err(CliError::Usage("--survey-wide needs --survey".into()));
    }

    if !args.responses.is_empty() && args.corpus.is_empty() {
        return Err(CliError::Usage("--responses needs the --corpus it answers".into()));
    }
    let mut prompts = HashMap::new();
    for path in &args.corpus {
        for p in read_corpus(path)? {
            prompts.insert(p.id.clone(), p);
        }
    }
    for spec in &args.responses {
        let (label, path) = labelled(spec);
        let responses = read_responses(&path)?;
        sources.extend(response_sources(&label, &prompts, &responses, args.split_setting, args.split_language)?);
    }
    if sources.len() < 2 {
        return Err(CliError::Usage("need at least two sources: --survey and/or --responses".into()));
    }
    let mut labels: Vec<&str> = sources.iter().map(|s| s.label.as_str()).collect();
    labels.sort();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Usage("source labels must be distinct".into()));
    }

    let opts = CompareOptions {
        bootstrap: BootstrapConfig {
            resamples: args.resamples,
            seed: args.seed,
            ..BootstrapConfig::default()
        },
        method: if args.exact_p { MwuMethod::Exact } else { MwuMethod::Normal },
    };
    let report = compare_all(sources, &opts)?;

    let dir = &args.out_dir;
    ensure_dir(dir)?;
    write_json(&dir.join(COMPARISON_JSON), &report)?;
    write_rows_csv(&report, create(&dir.join("comparison.csv"))?)?;
    write_text(&dir.join(FIG_KL), &kl_figure(&report))?;
    write_text(&dir.join(FIG_DISTRIBUTIONS), &distributions_figure(&report.sources))?;

    let mut msg = String::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    for r in &report.rows {
        if !pairs.contains(&(r.a.clone(), r.b.clone())) {
            pairs.push((r.a.clone(), r.b.clone()));
        }
    }
    for (a, b) in pairs {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.a == a && r.b == b).collect();
        let significant = rows.iter().filter(|r| r.p_value.is_some_and(|p| p < 0.05)).count();
        let flagged = rows.iter().filter(|r| r.flag.is_some()).count();
        let _ = writeln!(
            msg,
            "{a} vs {b}: {significant} of {} WEPs differ at p < 0.05, {flagged} flagged",
            rows.len()
        );
    }
    for s in &report.sources {
        if s.unparsed > 0 {
            let _ = writeln!(msg, "{}: {} replies without a probability were left out", s.label, s.unparsed);
        }
    }
    let _ = write!(msg, "comparison written to {}", dir.display());
    Ok(msg)
}

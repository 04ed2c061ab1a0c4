use std::fmt::Write;

use super::{create, ensure_dir, read_corpus, read_responses, write_json, write_text, FIG_CHOICE_SETS, FIG_MODES, SCORES_JSON};
use crate::args::ScoreArgs;
use crate::error::{CliError, CliResult};
use crate::scoring::{choice_sets_figure, modes_figure, summarize, write_scores_csv, write_tests_csv};

pub fn score(args: &ScoreArgs) -> CliResult<String> {
    if args.corpus.len() != args.responses.len() {
        return Err(CliError::Usage(format!(
            "{} --corpus but {} --responses; give them in pairs",
            args.corpus.len(),
            args.responses.len()
        )));
    }
    let mut runs = Vec::new();
    for (c, r) in args.corpus.iter().zip(&args.responses) {
        runs.push((read_corpus(c)?, read_responses(r)?));
    }
    let summary = summarize(&runs, args.replications, args.seed)?;

    let dir = &args.out_dir;
    ensure_dir(dir)?;
    write_json(&dir.join(SCORES_JSON), &summary)?;
    write_scores_csv(&summary, create(&dir.join("scores.csv"))?)?;
    write_tests_csv(&summary, create(&dir.join("tests.csv"))?)?;
    for r in &summary.reports {
        r.write_units_csv(create(&dir.join(format!("units-{}-{}.csv", r.mode, r.metric)))?)?;
    }
    write_text(&dir.join(FIG_MODES), &modes_figure(&summary))?;
    write_text(&dir.join(FIG_CHOICE_SETS), &choice_sets_figure(&summary))?;

    let mut msg = String::new();
    for r in &summary.reports {
        let mc = r.baseline_montecarlo.as_ref().expect("filled by summarize");
        let _ = writeln!(
            msg,
            "{:<9} {:<23} {:>6.2}  (n={}, random {:.2} exact, {:.2} +/- {:.2} simulated)",
            r.mode.as_str(),
            r.metric.as_str(),
            r.score,
            r.n_units,
            r.baseline,
            mc.value,
            mc.standard_error
        );
    }
    let _ = write!(msg, "reports written to {}", dir.display());
    Ok(msg)
}

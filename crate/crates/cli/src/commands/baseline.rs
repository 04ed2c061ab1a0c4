use std::fmt::Write;

use wepbench_core::domain::{ChoiceSetId, Mode};
use wepbench_core::metrics::{random_baseline, BaselineMethod, Metric};
use wepbench_core::promptgen::rq2::generate_rq2_corpus;

use super::{create, read_corpus};
use crate::args::{BaselineArgs, BaselineKind};
use crate::error::CliResult;

pub fn baseline(args: &BaselineArgs) -> CliResult<String> {
    let corpus = match &args.corpus {
        Some(path) => read_corpus(path)?,
        None => generate_rq2_corpus(Mode::Standard),
    };
    let mc = BaselineMethod::MonteCarlo {
        replications: args.replications,
        seed: args.seed,
    };
    let mut rows: Vec<[String; 5]> = Vec::new();
    for metric in Metric::ALL {
        let sets = ChoiceSetId::ALL.iter().map(|c| Some(*c)).chain(std::iter::once(None));
        for set in sets {
            let exact = random_baseline(metric, &corpus, set, BaselineMethod::Exact)?;
            let sim = match args.method {
                BaselineKind::Exact => None,
                _ => Some(random_baseline(metric, &corpus, set, mc)?),
            };
            let fmt = |v: f64| format!("{v:.3}");
            rows.push([
                metric.as_str().into(),
                set.map(|c| c.as_str()).unwrap_or("all").into(),
                if args.method == BaselineKind::Montecarlo { String::new() } else { fmt(exact.value) },
                sim.as_ref().map(|s| fmt(s.value)).unwrap_or_default(),
                sim.as_ref().map(|s| fmt(s.standard_error)).unwrap_or_default(),
            ]);
        }
    }

    let header = ["metric", "choice_set", "exact", "montecarlo", "montecarlo_se"];
    if let Some(path) = &args.out {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(header)?;
        for row in &rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| crate::error::CliError::io(path, e))?;
    }
    let mut msg = format!("{:<23} {:<14} {:>8} {:>11} {:>8}\n", header[0], header[1], header[2], header[3], "se");
    for r in &rows {
        let _ = writeln!(msg, "{:<23} {:<14} {:>8} {:>11} {:>8}", r[0], r[1], r[2], r[3], r[4]);
    }
    Ok(msg.trim_end().to_string())
}

use std::path::PathBuf;

use wepbench_core::domain::{Mode, NumbersId, TemplateRegistry};
use wepbench_core::jsonl::write_jsonl;
use wepbench_core::promptgen::rq1::{generate_rq1_corpus, Rq1Config};
use wepbench_core::promptgen::rq2::{generate_rq2_corpus_with, sample_numbers, EmpiricalSample};

use crate::args::{CorpusKind, GenerateArgs};
use crate::error::{CliError, CliResult};

fn reject(flags: &[(&str, bool)], corpus: &str) -> CliResult<()> {
    match flags.iter().find(|(_, given)| *given) {
        Some((flag, _)) => Err(CliError::Usage(format!("--{flag} does not apply to {corpus}"))),
        None => Ok(()),
    }
}

pub fn generate(args: &GenerateArgs) -> CliResult<String> {
    let (corpus, default_name) = match args.corpus {
        CorpusKind::Rq1 => {
            reject(
                &[
                    ("mode", args.mode.is_some()),
                    ("wide-seed", args.wide_seed.is_some()),
                    ("narrow-seed", args.narrow_seed.is_some()),
                ],
                "rq1",
            )?;
            let mut config = Rq1Config::default();
            if !args.settings.is_empty() {
                config.settings = args.settings.clone();
            }
            if !args.language.is_empty() {
                config.languages = args.language.clone();
            }
            config.gender_subject = args.subject.clone();
            for pair in &args.exclude {
                let (template, wep) = pair
                    .split_once(':')
                    .ok_or_else(|| CliError::Usage(format!("--exclude expects TEMPLATE_ID:WEP, got {pair:?}")))?;
                config.excluded_pairs.push((template.trim().into(), wep.trim().into()));
            }
            let loaded;
            let registry = match &args.templates {
                Some(dir) => {
                    loaded = TemplateRegistry::load_dir(dir)?;
                    &loaded
                }
                None => TemplateRegistry::builtin(),
            };
            (generate_rq1_corpus(registry, &config)?, "corpus-rq1.jsonl".to_string())
        }
        CorpusKind::Rq2 => {
            reject(
                &[
                    ("settings", !args.settings.is_empty()),
                    ("language", !args.language.is_empty()),
                    ("exclude", !args.exclude.is_empty()),
                    ("subject", args.subject.is_some()),
                    ("templates", args.templates.is_some()),
                ],
                "rq2",
            )?;
            let mode = args.mode.unwrap_or(Mode::Standard);
            let draw = |id, seed: Option<u64>| match seed {
                Some(s) => sample_numbers(id, s),
                None => EmpiricalSample::fixture(id),
            };
            let narrow = draw(NumbersId::Narrow, args.narrow_seed);
            let wide = draw(NumbersId::Wide, args.wide_seed);
            (generate_rq2_corpus_with(mode, &narrow, &wide), format!("corpus-rq2-{mode}.jsonl"))
        }
    };
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from(default_name));
    write_jsonl(&out, &corpus)?;
    Ok(format!("wrote {} records to {}", corpus.len(), out.display()))
}

mod baseline;
mod compare;
mod generate;
mod report;
mod run;
mod score;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use wepbench_core::domain::{PromptRecord, ResponseRecord};
use wepbench_core::jsonl::read_jsonl;

pub use baseline::baseline;
pub use compare::compare;
pub use generate::generate;
pub use report::report;
pub use run::run;
pub use score::score;

use crate::error::{CliError, CliResult};

pub const SCORES_JSON: &str = "scores.json";
pub const COMPARISON_JSON: &str = "comparison.json";
pub const FIG_MODES: &str = "fig-modes.svg";
pub const FIG_CHOICE_SETS: &str = "fig-choice-sets.svg";
pub const FIG_KL: &str = "fig-kl.svg";
pub const FIG_DISTRIBUTIONS: &str = "fig-distributions.svg";

pub(crate) fn read_corpus(path: &Path) -> CliResult<Vec<PromptRecord>> {
    let corpus: Vec<PromptRecord> = read_jsonl(path)?;
    for p in &corpus {
        p.validate()?;
    }
    Ok(corpus)
}

pub(crate) fn read_responses(path: &Path) -> CliResult<Vec<ResponseRecord>> {
    Ok(read_jsonl(path)?)
}

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    write_text(path, &(text + "\n"))
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub(crate) fn create(path: &Path) -> CliResult<std::fs::File> {
    std::fs::File::create(path).map_err(|e| CliError::io(path, e))
}

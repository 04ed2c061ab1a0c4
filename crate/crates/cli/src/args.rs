//! Command-line surface. Every long flag can also be set from a config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wepbench_core::domain::{Language, Mode, Setting};
use wepbench_gateway::MockKind;

#[derive(Debug, Parser)]
#[command(name = "wepbench", version, about = "Benchmark verbal probability expressions against numbers and people")]
pub struct Cli {
    /// Key-value file with defaults for the chosen command's flags; flags on
    /// the command line win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a prompt corpus as JSONL
    Generate(GenerateArgs),
    /// Send a corpus to a backend or mock and store the responses
    Run(RunArgs),
    /// Score RQ2 responses on the four consistency metrics
    Score(ScoreArgs),
    /// Compare probability distributions from models and the survey
    Compare(CompareArgs),
    /// Print random-guessing baselines
    Baseline(BaselineArgs),
    /// Redraw figures and write a summary from score and compare outputs
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Rq1,
    Rq2,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub corpus: CorpusKind,

    /// Output file [default: corpus-rq1.jsonl or corpus-rq2-<mode>.jsonl]
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// RQ1 context settings, comma separated [default: all]
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub settings: Vec<Setting>,

    /// RQ1 prompt languages, comma separated [default: english]
    #[arg(long, alias = "languages", value_delimiter = ',', value_name = "LIST")]
    pub language: Vec<Language>,

    /// Skip one RQ1 template and WEP combination, as TEMPLATE_ID:WEP
    #[arg(long, value_name = "PAIR")]
    pub exclude: Vec<String>,

    /// Subject replacing She/He in the gendered RQ1 settings
    #[arg(long, value_name = "NAME")]
    pub subject: Option<String>,

    /// Directory of template tables replacing the built-in registry
    #[arg(long, value_name = "DIR")]
    pub templates: Option<PathBuf>,

    /// RQ2 prompting mode [default: standard]
    #[arg(long)]
    pub mode: Option<Mode>,

    /// Redraw the wide RQ2 sample from this seed instead of the fixture
    #[arg(long, value_name = "SEED")]
    pub wide_seed: Option<u64>,

    /// Redraw the narrow RQ2 sample from this seed instead of the fixture
    #[arg(long, value_name = "SEED")]
    pub narrow_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,

    /// Responses JSONL, aligned with the corpus order
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Answer with a deterministic mock instead of the HTTP backend
    #[arg(long, value_name = "NAME")]
    pub mock: Option<MockKind>,

    /// Phrase answered by the constant-choice mock
    #[arg(long, value_name = "PHRASE", default_value = "is maybe")]
    pub mock_choice: String,

    /// Seed of the uniform-random mock
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    pub mock_seed: u64,

    /// Survey CSV for the survey-median mock
    #[arg(long, value_name = "FILE")]
    pub survey: Option<PathBuf>,

    /// Chat-completion URL
    #[arg(long, value_name = "URL")]
    pub endpoint: Option<String>,

    #[arg(long)]
    pub model: Option<String>,

    /// Backend name recorded on responses and used in cache keys
    #[arg(long, value_name = "NAME")]
    pub backend_name: Option<String>,

    /// Environment variable holding the API key
    #[arg(long, value_name = "VAR")]
    pub api_key_env: Option<String>,

    /// Send requests without an Authorization header
    #[arg(long)]
    pub no_auth: bool,

    #[arg(long, value_name = "N")]
    pub max_retries: Option<u32>,

    #[arg(long, value_name = "SECS")]
    pub timeout_secs: Option<u64>,

    /// First retry delay in milliseconds; doubles on each retry
    #[arg(long, value_name = "MS")]
    pub retry_base_ms: Option<u64>,

    /// Concurrent requests
    #[arg(long, value_name = "N")]
    pub parallelism: Option<usize>,

    /// Response cache JSONL, created if missing
    #[arg(long, value_name = "FILE")]
    pub cache: Option<PathBuf>,

    /// Transcript JSONL, appended to
    #[arg(long, value_name = "FILE")]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    Exact,
    Montecarlo,
    Both,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// RQ2 corpus; repeat once per mode, paired with --responses
    #[arg(long, value_name = "FILE", required = true)]
    pub corpus: Vec<PathBuf>,

    #[arg(long, value_name = "FILE", required = true)]
    pub responses: Vec<PathBuf>,

    #[arg(long, value_name = "DIR", default_value = "report")]
    pub out_dir: PathBuf,

    /// Monte-Carlo replications for the reported baseline
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub replications: usize,

    #[arg(long, value_name = "SEED", default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Model responses as LABEL=FILE; repeatable
    #[arg(long, value_name = "LABEL=FILE")]
    pub responses: Vec<String>,

    /// RQ1 corpora the responses answer; repeatable
    #[arg(long, value_name = "FILE")]
    pub corpus: Vec<PathBuf>,

    /// Survey CSV in respondent_id,wep,probability form
    #[arg(long, value_name = "FILE")]
    pub survey: Option<PathBuf>,

    /// Read the survey as one row per respondent and one column per WEP
    #[arg(long)]
    pub survey_wide: bool,

    /// Split every model source by context setting
    #[arg(long)]
    pub split_setting: bool,

    /// Split every model source by prompt language
    #[arg(long)]
    pub split_language: bool,

    #[arg(long, value_name = "DIR", default_value = "report")]
    pub out_dir: PathBuf,

    /// Bootstrap resamples for the rank-biserial interval
    #[arg(long, value_name = "N", default_value_t = 10_000)]
    pub resamples: usize,

    #[arg(long, value_name = "SEED", default_value_t = 20_240_601)]
    pub seed: u64,

    /// Use the exact Mann-Whitney null distribution when n1*n2 <= 400
    #[arg(long)]
    pub exact_p: bool,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// RQ2 corpus [default: the built-in standard corpus]
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = BaselineKind::Both)]
    pub method: BaselineKind,

    #[arg(long, value_name = "N", default_value_t = 10)]
    pub replications: usize,

    #[arg(long, value_name = "SEED", default_value_t = 2024)]
    pub seed: u64,

    /// Also write the table as CSV
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding scores.json and/or comparison.json
    #[arg(long, value_name = "DIR", default_value = "report")]
    pub dir: PathBuf,
}

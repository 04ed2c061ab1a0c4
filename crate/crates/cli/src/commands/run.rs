use std::time::Duration;

use wepbench_core::jsonl::write_jsonl;
use wepbench_gateway::{BackendConfig, Cache, Gateway, HttpBackend, MockRespondent, MockSpec, Respondent, Transcript};

use super::read_corpus;
use crate::args::RunArgs;
use crate::error::{CliError, CliResult};

fn respondent(args: &RunArgs) -> CliResult<(Box<dyn Respondent>, usize)> {
    if let Some(kind) = args.mock {
        let live_only = [
            ("endpoint", args.endpoint.is_some()),
            ("model", args.model.is_some()),
            ("backend-name", args.backend_name.is_some()),
            ("api-key-env", args.api_key_env.is_some()),
            ("no-auth", args.no_auth),
            ("max-retries", args.max_retries.is_some()),
            ("timeout-secs", args.timeout_secs.is_some()),
            ("retry-base-ms", args.retry_base_ms.is_some()),
        ];
        if let Some((flag, _)) = live_only.iter().find(|(_, given)| *given) {
            return Err(CliError::Usage(format!("--{flag} cannot be combined with --mock")));
        }
        let spec = MockSpec {
            kind,
            choice: args.mock_choice.clone(),
            seed: args.mock_seed,
            survey: args.survey.clone(),
        };
        return Ok((Box::new(MockRespondent::new(spec)?), args.parallelism.unwrap_or(1)));
    }

    let mut config = BackendConfig::default();
    if let Some(v) = &args.endpoint {
        config.endpoint = v.clone();
    }
    if let Some(v) = &args.model {
        config.model = v.clone();
    }
    if let Some(v) = &args.backend_name {
        config.name = v.clone();
    }
    if let Some(v) = &args.api_key_env {
        config.api_key_env = Some(v.clone());
    }
    if args.no_auth {
        config.api_key_env = None;
    }
    if let Some(v) = args.max_retries {
        config.max_retries = v;
    }
    if let Some(v) = args.timeout_secs {
        config.timeout = Duration::from_secs(v);
    }
    if let Some(v) = args.retry_base_ms {
        config.retry_base = Duration::from_millis(v);
    }
    if let Some(v) = args.parallelism {
        config.parallelism = v;
    }
    let parallelism = config.parallelism;
    Ok((Box::new(HttpBackend::new(config)?), parallelism))
}

pub fn run(args: &RunArgs) -> CliResult<String> {
    let corpus = read_corpus(&args.corpus)?;
    let (respondent, parallelism) = respondent(args)?;
    let mut gateway = Gateway::new(respondent).with_parallelism(parallelism);
    if let Some(path) = &args.cache {
        gateway = gateway.with_cache(Cache::open(path)?);
    }
    if let Some(path) = &args.transcript {
        gateway = gateway.with_transcript(Transcript::open(path)?);
    }
    let out = gateway.run_batch(&corpus)?;
    write_jsonl(&args.out, &out.responses)?;

    let s = &out.summary;
    eprintln!(
        "{} requests issued, {} cache hits, {} failures, {} unparsed replies",
        s.requests_issued, s.cache_hits, s.failures, s.parse_failures
    );
    if s.failures > 0 {
        return Err(CliError::Backend(format!(
            "{} of {} prompts got no usable reply; responses written to {}",
            s.failures,
            s.total,
            args.out.display()
        )));
    }
    Ok(format!("wrote {} responses to {}", out.responses.len(), args.out.display()))
}

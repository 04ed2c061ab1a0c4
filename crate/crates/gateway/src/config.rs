use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::{GatewayError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BackendConfig {
    pub name: String,
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: Option<String>,
    pub max_retries: u32,
    pub timeout: Duration,
    pub parallelism: usize,
    /// First retry delay; doubles on each further attempt.
    pub retry_base: Duration,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            name: "openai".into(),
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4-0613".into(),
            temperature: 0.0,
            api_key_env: Some("OPENAI_API_KEY".into()),
            max_retries: 5,
            timeout: Duration::from_secs(60),
            parallelism: 4,
            retry_base: Duration::from_millis(500),
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<()> {
        if self.temperature != 0.0 {
            return Err(GatewayError::Config(format!(
                "temperature is fixed at 0, got {}",
                self.temperature
            )));
        }
        if self.parallelism == 0 {
            return Err(GatewayError::Config("parallelism must be at least 1".into()));
        }
        if !(self.endpoint.starts_with("http://") || self.endpoint.starts_with("https://")) {
            return Err(GatewayError::Config(format!("endpoint {:?} is not an http(s) URL", self.endpoint)));
        }
        if self.name.trim().is_empty() || self.model.trim().is_empty() {
            return Err(GatewayError::Config("backend name and model must be set".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MockKind {
    ConstantChoice,
    SampleCalibrated,
    GaussianCalibrated,
    UniformRandom,
    SurveyMedian,
}

impl MockKind {
    pub const ALL: [MockKind; 5] = [
        MockKind::ConstantChoice,
        MockKind::SampleCalibrated,
        MockKind::GaussianCalibrated,
        MockKind::UniformRandom,
        MockKind::SurveyMedian,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MockKind::ConstantChoice => "constant-choice",
            MockKind::SampleCalibrated => "sample-calibrated",
            MockKind::GaussianCalibrated => "gaussian-calibrated",
            MockKind::UniformRandom => "uniform-random",
            MockKind::SurveyMedian => "survey-median",
        }
    }

    pub fn names() -> String {
        Self::ALL.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for MockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MockKind {
    type Err = GatewayError;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == wanted)
            .ok_or_else(|| GatewayError::Config(format!("unknown mock {s:?}; available mocks: {}", Self::names())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MockSpec {
    pub kind: MockKind,
    /// Phrase answered by `constant-choice`.
    pub choice: String,
    pub seed: u64,
    /// Survey CSV read by `survey-median`.
    pub survey: Option<PathBuf>,
}

impl MockSpec {
    pub fn new(kind: MockKind) -> Self {
        MockSpec {
            kind,
            choice: "is maybe".into(),
            seed: 0,
            survey: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mock_names() {
        assert_eq!("sample_calibrated".parse::<MockKind>().unwrap(), MockKind::SampleCalibrated);
        let err = "psychic".parse::<MockKind>().unwrap_err().to_string();
        assert!(err.contains("constant-choice") && err.contains("survey-median"), "{err}");
    }

    #[test]
    fn temperature_is_pinned() {
        let mut c = BackendConfig::default();
        c.validate().unwrap();
        c.temperature = 0.7;
        assert!(c.validate().is_err());
    }
}

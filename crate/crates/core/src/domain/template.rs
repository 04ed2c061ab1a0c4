//! Context templates for numeric elicitation.
//!
//! Templates ship as tab-separated tables under `data/` (one per setting and
//! language) and are embedded at build time. [`TemplateRegistry::load_dir`]
//! reads the same files from disk so wording can be edited without a rebuild.
//!
//! Row format: `id  setting  language  statement_form  question_form`.
//! The female- and male-centric settings share one table whose subject is
//! written `She / He`; loading expands each row into one template per setting.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const PLACEHOLDER: &str = "{}";
const SUBJECT_TOKEN: &str = "She / He";
const SUBJECT_TOKEN_LOWER: &str = "she / he";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Setting {
    /// Concise narrative context.
    Cnc,
    /// Extended narrative context.
    Enc,
    /// Female-centric narrative context.
    Fcnc,
    /// Male-centric narrative context.
    Mcnc,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::Cnc, Setting::Enc, Setting::Fcnc, Setting::Mcnc];

    pub fn as_str(&self) -> &'static str {
        match self {
            Setting::Cnc => "CNC",
            Setting::Enc => "ENC",
            Setting::Fcnc => "FCNC",
            Setting::Mcnc => "MCNC",
        }
    }

    fn default_subject(&self) -> Option<&'static str> {
        match self {
            Setting::Fcnc => Some("She"),
            Setting::Mcnc => Some("He"),
            _ => None,
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_uppercase().as_str() {
            "CNC" => Ok(Setting::Cnc),
            "ENC" => Ok(Setting::Enc),
            "FCNC" => Ok(Setting::Fcnc),
            "MCNC" => Ok(Setting::Mcnc),
            other => Err(Error::InvalidConfig(format!(
                "unknown setting {other:?} (expected cnc, enc, fcnc or mcnc)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    English,
    Chinese,
}

impl Language {
    pub fn code(&self) -> &'static str {
        match self {
            Language::English => "en",
            Language::Chinese => "zh",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::English => "english",
            Language::Chinese => "chinese",
        })
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_lowercase().as_str() {
            "en" | "english" => Ok(Language::English),
            "zh" | "chinese" => Ok(Language::Chinese),
            other => Err(Error::InvalidConfig(format!(
                "unknown language {other:?} (expected english or chinese)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextTemplate {
    pub id: String,
    pub setting: Setting,
    pub language: Language,
    /// Sentence with exactly one `{}` slot for the WEP.
    pub statement_form: String,
    /// The same sentence without the WEP, phrased to follow "do you think".
    pub question_form: String,
    /// The row as written in the table (gendered rows keep `She / He`).
    pub printed_form: String,
    printed_question: String,
    pub subject: Option<String>,
}

impl ContextTemplate {
    /// Re-renders a gendered template with another subject. Non-gendered
    /// templates are returned unchanged.
    pub fn with_subject(&self, subject: &str) -> ContextTemplate {
        if self.subject.is_none() {
            return self.clone();
        }
        ContextTemplate {
            statement_form: resolve_subject(&self.printed_form, Some(subject)),
            question_form: resolve_subject(&self.printed_question, Some(subject)),
            subject: Some(subject.to_string()),
            ..self.clone()
        }
    }

    /// Resolves the subject token inside text authored against the printed
    /// form (used for grammar overrides).
    pub fn resolve(&self, text: &str) -> String {
        resolve_subject(text, self.subject.as_deref())
    }

    /// Whitespace-delimited words in the printed row, not counting the slot.
    pub fn word_length(&self) -> usize {
        self.printed_form
            .split_whitespace()
            .filter(|w| *w != PLACEHOLDER)
            .count()
    }
}

fn resolve_subject(text: &str, subject: Option<&str>) -> String {
    match subject {
        None => text.to_string(),
        Some(subject) => {
            // pronouns are lowercased mid-sentence, names are not
            let lower = match subject {
                "She" | "He" | "They" => subject.to_lowercase(),
                _ => subject.to_string(),
            };
            text.replace(SUBJECT_TOKEN, subject)
                .replace(SUBJECT_TOKEN_LOWER, &lower)
        }
    }
}

const BUILTIN_TABLES: [(&str, &str); 4] = [
    ("templates_cnc_en.tsv", include_str!("../../data/templates_cnc_en.tsv")),
    ("templates_enc_en.tsv", include_str!("../../data/templates_enc_en.tsv")),
    ("templates_gendered_en.tsv", include_str!("../../data/templates_gendered_en.tsv")),
    ("templates_cnc_zh.tsv", include_str!("../../data/templates_cnc_zh.tsv")),
];
const OVERRIDES_FILE: &str = "overrides_en.tsv";
const BUILTIN_OVERRIDES: &str = include_str!("../../data/overrides_en.tsv");

type OverrideKey = (String, Language, String);

/// All context templates plus the per-(template, WEP) grammar overrides.
#[derive(Debug, Clone)]
pub struct TemplateRegistry {
    templates: Vec<ContextTemplate>,
    overrides: HashMap<OverrideKey, String>,
}

impl TemplateRegistry {
    /// The embedded tables. Panics only if the shipped data is malformed,
    /// which the unit tests rule out.
    pub fn builtin() -> &'static TemplateRegistry {
        static REGISTRY: OnceLock<TemplateRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let tables: Vec<(PathBuf, String)> = BUILTIN_TABLES
                .iter()
                .map(|(n, c)| (PathBuf::from(n), c.to_string()))
                .collect();
            Self::from_tables(&tables, (Path::new(OVERRIDES_FILE), BUILTIN_OVERRIDES))
                .expect("embedded template tables are valid")
        })
    }

    /// Loads the same file set as the embedded registry from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut tables = Vec::new();
        for (name, _) in BUILTIN_TABLES {
            let path = dir.join(name);
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            tables.push((path, text));
        }
        let path = dir.join(OVERRIDES_FILE);
        let overrides = match std::fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(Error::io(&path, e)),
        };
        Self::from_tables(&tables, (&path, &overrides))
    }

    pub fn from_tables(tables: &[(PathBuf, String)], overrides: (&Path, &str)) -> Result<Self> {
        let mut templates = Vec::new();
        for (path, text) in tables {
            for (line, fields) in rows(text) {
                let err = |message: String| Error::Data {
                    path: path.clone(),
                    line,
                    message,
                };
                let [id, setting, language, statement, question] = fields[..] else {
                    return Err(err(format!("expected 5 tab-separated fields, found {}", fields.len())));
                };
                if statement.matches(PLACEHOLDER).count() != 1 {
                    return Err(err("statement_form must contain exactly one {} placeholder".into()));
                }
                if question.contains(PLACEHOLDER) {
                    return Err(err("question_form must not contain a placeholder".into()));
                }
                let language: Language = language.parse().map_err(|e: Error| err(e.to_string()))?;
                let settings: Vec<Setting> = if setting == "FCNC/MCNC" {
                    vec![Setting::Fcnc, Setting::Mcnc]
                } else {
                    vec![setting.parse().map_err(|e: Error| err(e.to_string()))?]
                };
                for setting in settings {
                    let subject = setting.default_subject();
                    templates.push(ContextTemplate {
                        id: id.to_string(),
                        setting,
                        language,
                        statement_form: resolve_subject(statement, subject),
                        question_form: resolve_subject(question, subject),
                        printed_form: statement.to_string(),
                        printed_question: question.to_string(),
                        subject: subject.map(str::to_string),
                    });
                }
            }
        }
        templates.sort_by(|a, b| {
            (a.setting, a.language, &a.id).cmp(&(b.setting, b.language, &b.id))
        });
        for pair in templates.windows(2) {
            if (pair[0].setting, pair[0].language, &pair[0].id) == (pair[1].setting, pair[1].language, &pair[1].id) {
                return Err(Error::Validation(format!(
                    "duplicate template id {} in {} {}",
                    pair[0].id, pair[0].setting, pair[0].language
                )));
            }
        }

        let (path, text) = overrides;
        let mut table = HashMap::new();
        for (line, fields) in rows(text) {
            let err = |message: String| Error::Data {
                path: path.to_path_buf(),
                line,
                message,
            };
            let [template_id, language, wep, statement] = fields[..] else {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            };
            let language: Language = language.parse().map_err(|e: Error| err(e.to_string()))?;
            let wep = crate::domain::wep_by_name(wep)
                .ok_or_else(|| err(format!("unknown WEP {wep:?}")))?;
            if statement.contains(PLACEHOLDER) {
                return Err(err("override statement must be fully instantiated".into()));
            }
            table.insert(
                (template_id.to_string(), language, wep.canonical_name.to_string()),
                statement.to_string(),
            );
        }

        Ok(TemplateRegistry {
            templates,
            overrides: table,
        })
    }

    pub fn templates(&self) -> &[ContextTemplate] {
        &self.templates
    }

    /// Templates for one setting and language, ordered by id.
    pub fn select(&self, setting: Setting, language: Language) -> impl Iterator<Item = &ContextTemplate> {
        self.templates
            .iter()
            .filter(move |t| t.setting == setting && t.language == language)
    }

    pub fn count(&self, setting: Setting, language: Language) -> usize {
        self.select(setting, language).count()
    }

    pub fn get(&self, setting: Setting, language: Language, id: &str) -> Option<&ContextTemplate> {
        self.select(setting, language).find(|t| t.id == id)
    }

    /// Hand-adjusted statement for a pair that does not read well with plain
    /// substitution, with the template's subject applied.
    pub fn statement_override(&self, template: &ContextTemplate, wep: &str) -> Option<String> {
        self.overrides
            .get(&(template.id.clone(), template.language, wep.to_string()))
            .map(|s| template.resolve(s))
    }

    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }

    /// Mean printed word length over one setting's templates.
    pub fn mean_word_length(&self, setting: Setting, language: Language) -> f64 {
        let lengths: Vec<usize> = self.select(setting, language).map(|t| t.word_length()).collect();
        lengths.iter().sum::<usize>() as f64 / lengths.len().max(1) as f64
    }
}

/// Non-empty, non-comment lines split on tabs, with 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').collect()))
}

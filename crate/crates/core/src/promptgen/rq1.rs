//! Numeric elicitation corpus: every context template crossed with every WEP.

use std::collections::HashSet;

use crate::domain::{
    wep_by_name, wep_registry, ContextTemplate, Corpus, Language, Mode, PromptRecord, Provenance,
    Rq1Provenance, Setting, TemplateRegistry, Wep, PLACEHOLDER,
};
use crate::{Error, Result};

pub const INSTRUCTION_EN: &str =
    "Format your answer as a float value between 0 and 1, and make your answer short.";
pub const INSTRUCTION_ZH: &str =
    "你的输出只有0到1之间的带有两位小数的浮点值。回答问题时直接给出最终答案，不要加入中间思考过程，不要重复问题。";

#[derive(Debug, Clone, PartialEq)]
pub struct Rq1Config {
    pub settings: Vec<Setting>,
    pub languages: Vec<Language>,
    /// `(template id, wep)` pairs to skip; a template id applies to every
    /// selected setting that uses it.
    pub excluded_pairs: Vec<(String, String)>,
    /// Replaces the She / He subject of the gendered settings.
    pub gender_subject: Option<String>,
}

impl Default for Rq1Config {
    /// All four English settings, nothing excluded.
    fn default() -> Self {
        Rq1Config {
            settings: Setting::ALL.to_vec(),
            languages: vec![Language::English],
            excluded_pairs: Vec::new(),
            gender_subject: None,
        }
    }
}

impl Rq1Config {
    pub fn validate(&self) -> Result<()> {
        if self.settings.is_empty() {
            return Err(Error::InvalidConfig("no settings selected".into()));
        }
        if self.languages.is_empty() {
            return Err(Error::InvalidConfig("no languages selected".into()));
        }
        if self.languages.contains(&Language::Chinese) {
            if let Some(s) = self.settings.iter().find(|s| **s != Setting::Cnc) {
                return Err(Error::InvalidConfig(format!(
                    "chinese templates exist only for CNC, not {s}"
                )));
            }
        }
        for (_, wep) in &self.excluded_pairs {
            if wep_by_name(wep).is_none() {
                return Err(Error::InvalidConfig(format!("excluded pair names unknown WEP {wep:?}")));
            }
        }
        if let Some(subject) = &self.gender_subject {
            if subject.trim().is_empty() || subject.contains(PLACEHOLDER) {
                return Err(Error::InvalidConfig(format!("unusable gender subject {subject:?}")));
            }
        }
        Ok(())
    }
}

/// Fills the template's slot with the WEP, preferring a grammar override
/// when the registry has one.
pub fn instantiate_statement(
    registry: &TemplateRegistry,
    template: &ContextTemplate,
    wep: &Wep,
    language: Language,
) -> Result<String> {
    let fail = |reason: &str| Error::Generation {
        template_id: template.id.clone(),
        wep: wep.canonical_name.to_string(),
        reason: reason.to_string(),
    };
    if template.language != language {
        return Err(fail(&format!("template is {} but {language} was requested", template.language)));
    }
    if let Some(statement) = registry.statement_override(template, wep.canonical_name) {
        return Ok(statement);
    }
    let form = match language {
        Language::English => Some(wep.english_form),
        Language::Chinese => wep.chinese_form,
    }
    .ok_or_else(|| fail(&format!("no {language} surface form")))?;
    let statement = template.statement_form.replacen(PLACEHOLDER, form, 1);
    if statement.contains(PLACEHOLDER) {
        return Err(fail("placeholder left after substitution"));
    }
    Ok(statement)
}

/// The statement as it appears inside the quotes: the closing period goes,
/// unless it belongs to an abbreviation such as "a.m.".
fn quoted(statement: &str) -> &str {
    match statement.strip_suffix('.') {
        Some(rest) if !rest.rsplit(' ').next().unwrap_or("").contains('.') => rest,
        _ => statement,
    }
}

pub fn render_body(statement: &str, question_form: &str, language: Language) -> String {
    match language {
        Language::English => format!(
            "{INSTRUCTION_EN} Given the statement \"{}\", with what probability do you think {question_form}?",
            quoted(statement)
        ),
        Language::Chinese => format!("{INSTRUCTION_ZH}根据陈述“{statement}”，您认为{question_form}的概率是多少？"),
    }
}

pub fn prompt_id(template: &ContextTemplate, wep: &Wep) -> String {
    format!(
        "rq1-{}-{}-{}-{}",
        template.setting.as_str().to_lowercase(),
        template.language.code(),
        template.id,
        wep.slug()
    )
}

pub fn build_rq1_prompt(
    registry: &TemplateRegistry,
    template: &ContextTemplate,
    wep: &Wep,
    language: Language,
) -> Result<PromptRecord> {
    let statement = instantiate_statement(registry, template, wep, language)?;
    Ok(PromptRecord {
        id: prompt_id(template, wep),
        corpus: Corpus::Rq1,
        body: render_body(&statement, &template.question_form, language),
        language,
        mode: Mode::Standard,
        provenance: Provenance::Rq1(Rq1Provenance {
            template_id: template.id.clone(),
            setting: template.setting,
            wep: wep.canonical_name.to_string(),
        }),
    })
}

/// Cross product of the selected templates with all 17 WEPs, ordered by
/// setting, language, template id and WEP.
pub fn generate_rq1_corpus(registry: &TemplateRegistry, config: &Rq1Config) -> Result<Vec<PromptRecord>> {
    config.validate()?;
    let mut settings = config.settings.clone();
    settings.sort();
    settings.dedup();
    let mut languages = config.languages.clone();
    languages.sort();
    languages.dedup();
    let excluded: HashSet<(String, &str)> = config
        .excluded_pairs
        .iter()
        .map(|(t, w)| (t.clone(), wep_by_name(w).expect("validated").canonical_name))
        .collect();

    let mut out = Vec::new();
    for &setting in &settings {
        for &language in &languages {
            for template in registry.select(setting, language) {
                let template = match &config.gender_subject {
                    Some(subject) => template.with_subject(subject),
                    None => template.clone(),
                };
                for wep in wep_registry() {
                    if excluded.contains(&(template.id.clone(), wep.canonical_name)) {
                        continue;
                    }
                    out.push(build_rq1_prompt(registry, &template, wep, language)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry() -> &'static TemplateRegistry {
        TemplateRegistry::builtin()
    }

    fn wep(name: &str) -> &'static Wep {
        wep_by_name(name).unwrap()
    }

    fn cnc(id: &str) -> &'static ContextTemplate {
        registry().get(Setting::Cnc, Language::English, id).unwrap()
    }

    #[test]
    fn worked_example_statement_and_body() {
        let t = cnc("cnc-02");
        let s = instantiate_statement(registry(), t, wep("probably"), Language::English).unwrap();
        assert_eq!(s, "They will probably launch before us.");
        let p = build_rq1_prompt(registry(), t, wep("probably"), Language::English).unwrap();
        assert_eq!(
            p.body,
            "Format your answer as a float value between 0 and 1, and make your answer short. \
             Given the statement \"They will probably launch before us\", with what probability \
             do you think they will launch before us?"
        );
        assert_eq!(p.id, "rq1-cnc-en-cnc-02-probably");
    }

    #[test]
    fn plain_substitution() {
        let s = instantiate_statement(registry(), cnc("cnc-01"), wep("likely"), Language::English).unwrap();
        assert_eq!(s, "The film festival likely attracts a large audience.");
    }

    #[test]
    fn gendered_override_is_grammatical() {
        let t = registry().get(Setting::Fcnc, Language::English, "gen-01").unwrap();
        let s = instantiate_statement(registry(), t, wep("almost certain"), Language::English).unwrap();
        assert_eq!(s, "She almost certainly wakes up at 6 a.m.");
        let p = build_rq1_prompt(registry(), t, wep("almost certain"), Language::English).unwrap();
        // abbreviation period survives inside the quotes
        assert!(p.body.contains("\"She almost certainly wakes up at 6 a.m.\""), "{}", p.body);
    }

    #[test]
    fn chinese_body() {
        let t = registry().get(Setting::Cnc, Language::Chinese, "cnc-02").unwrap();
        let p = build_rq1_prompt(registry(), t, wep("likely"), Language::Chinese).unwrap();
        assert!(p.body.starts_with("你的输出只有0到1之间"));
        assert!(p.body.ends_with("根据陈述“他们可能在我们之前发布”，您认为他们在我们之前发布的概率是多少？"));
        assert_eq!(p.language, Language::Chinese);
    }

    #[test]
    fn language_mismatch_is_generation_error() {
        let err = instantiate_statement(registry(), cnc("cnc-01"), wep("likely"), Language::Chinese).unwrap_err();
        assert!(matches!(err, Error::Generation { .. }));
    }

    #[test]
    fn missing_surface_form_names_pair() {
        let t = registry().get(Setting::Cnc, Language::Chinese, "cnc-01").unwrap();
        let bare = Wep {
            canonical_name: "likely",
            english_form: "likely",
            chinese_form: None,
        };
        match instantiate_statement(registry(), t, &bare, Language::Chinese).unwrap_err() {
            Error::Generation { template_id, wep, .. } => {
                assert_eq!(template_id, "cnc-01");
                assert_eq!(wep, "likely");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn corpus_sizes() {
        let all = generate_rq1_corpus(registry(), &Rq1Config::default()).unwrap();
        assert_eq!(all.len(), 782);
        let only = |settings: Vec<Setting>, languages: Vec<Language>| Rq1Config {
            settings,
            languages,
            ..Rq1Config::default()
        };
        let cnc_en = generate_rq1_corpus(registry(), &only(vec![Setting::Cnc], vec![Language::English])).unwrap();
        assert_eq!(cnc_en.len(), 255);
        let cnc_zh = generate_rq1_corpus(registry(), &only(vec![Setting::Cnc], vec![Language::Chinese])).unwrap();
        assert_eq!(cnc_zh.len(), 255);
        let enc_f = generate_rq1_corpus(
            registry(),
            &only(vec![Setting::Enc, Setting::Fcnc], vec![Language::English]),
        )
        .unwrap();
        assert_eq!(enc_f.len(), 357);
    }

    #[test]
    fn chinese_requires_cnc() {
        let config = Rq1Config {
            settings: vec![Setting::Enc],
            languages: vec![Language::Chinese],
            ..Rq1Config::default()
        };
        assert!(matches!(generate_rq1_corpus(registry(), &config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn exclusions_apply_across_settings() {
        let config = Rq1Config {
            settings: vec![Setting::Fcnc, Setting::Mcnc],
            excluded_pairs: vec![("gen-03".into(), "about_even".into())],
            ..Rq1Config::default()
        };
        let corpus = generate_rq1_corpus(registry(), &config).unwrap();
        assert_eq!(corpus.len(), 20 * 17 - 2);
        assert!(corpus.iter().all(|p| !p.id.ends_with("gen-03-about_even")));
    }

    #[test]
    fn custom_subject() {
        let config = Rq1Config {
            settings: vec![Setting::Fcnc],
            gender_subject: Some("Alex".into()),
            ..Rq1Config::default()
        };
        let corpus = generate_rq1_corpus(registry(), &config).unwrap();
        assert_eq!(corpus.len(), 170);
        for p in &corpus {
            assert!(!p.body.contains("She") && !p.body.contains(" she "), "{}", p.body);
            assert!(p.body.contains("Alex"));
        }
    }

    #[test]
    fn bodies_round_trip() {
        let mut config = Rq1Config::default();
        let mut corpus = generate_rq1_corpus(registry(), &config).unwrap();
        config.settings = vec![Setting::Cnc];
        config.languages = vec![Language::Chinese];
        corpus.extend(generate_rq1_corpus(registry(), &config).unwrap());
        for p in &corpus {
            let prov = p.rq1().unwrap();
            let w = wep_by_name(&prov.wep).unwrap();
            let t = registry().get(prov.setting, p.language, &prov.template_id).unwrap();
            let (open, close, ask) = match p.language {
                Language::English => ('"', '"', "do you think "),
                Language::Chinese => ('“', '”', "您认为"),
            };
            let quotes = p.body.chars().filter(|c| *c == open || *c == close).count();
            assert_eq!(quotes, 2, "{}", p.id);
            let start = p.body.find(open).unwrap() + open.len_utf8();
            let end = start + p.body[start..].find(close).unwrap();
            let quoted = p.body[start..end].to_lowercase();
            let form = match p.language {
                Language::English => w.english_form,
                Language::Chinese => w.chinese_form.unwrap(),
            };
            assert!(quoted.contains(form), "{}: {quoted}", p.id);
            let after = &p.body[p.body.find(ask).unwrap() + ask.len()..];
            assert!(after.starts_with(&t.question_form), "{}", p.id);
            assert!(!p.body.contains(PLACEHOLDER));
        }
    }

    #[test]
    fn deterministic() {
        let a = generate_rq1_corpus(registry(), &Rq1Config::default()).unwrap();
        let b = generate_rq1_corpus(registry(), &Rq1Config::default()).unwrap();
        assert_eq!(a, b);
        let ids: HashSet<_> = a.iter().map(|p| &p.id).collect();
        assert_eq!(ids.len(), a.len());
    }
}

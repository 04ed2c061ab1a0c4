//! Mock respondents through the gateway.

use wepbench_core::domain::{Mode, TemplateRegistry};
use wepbench_core::promptgen::rq1::{generate_rq1_corpus, Rq1Config};
use wepbench_core::promptgen::rq2::generate_rq2_corpus;
use wepbench_gateway::{Cache, Gateway, MockKind, MockRespondent, MockSpec};

fn gateway(kind: MockKind) -> Gateway {
    Gateway::new(Box::new(MockRespondent::new(MockSpec::new(kind)).unwrap())).with_parallelism(8)
}

#[test]
fn mock_batches_are_byte_identical() {
    let corpus = generate_rq2_corpus(Mode::Cot);
    for kind in MockKind::ALL {
        if kind == MockKind::SurveyMedian {
            continue;
        }
        let a = gateway(kind).run_batch(&corpus).unwrap();
        let b = gateway(kind).run_batch(&corpus).unwrap();
        let ja: Vec<String> = a.responses.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
        let jb: Vec<String> = b.responses.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
        assert_eq!(ja, jb, "{kind}");
        assert!(a.responses.iter().all(|r| r.timestamp.is_none()));
    }
}

#[test]
fn calibrated_mocks_always_parse() {
    let corpus = generate_rq2_corpus(Mode::Standard);
    for kind in [MockKind::ConstantChoice, MockKind::SampleCalibrated, MockKind::GaussianCalibrated] {
        let out = gateway(kind).run_batch(&corpus).unwrap();
        assert_eq!(out.summary.parse_failures, 0, "{kind}");
        assert_eq!(out.summary.requests_issued, corpus.len());
    }
}

#[test]
fn survey_median_answers_rq1() {
    let dir = tempfile::tempdir().unwrap();
    let survey = dir.path().join("survey.csv");
    std::fs::write(
        &survey,
        "respondent_id,wep,probability\nr1,almost certain,90\nr2,almost certain,96\nr3,almost certain,95\nr1,probably,70\n",
    )
    .unwrap();
    let mut spec = MockSpec::new(MockKind::SurveyMedian);
    spec.survey = Some(survey);
    let mock = MockRespondent::new(spec).unwrap();
    let corpus = generate_rq1_corpus(TemplateRegistry::builtin(), &Rq1Config::default()).unwrap();
    let out = Gateway::new(Box::new(mock)).run_batch(&corpus).unwrap();
    for (p, r) in corpus.iter().zip(&out.responses) {
        match p.rq1().unwrap().wep.as_str() {
            "almost certain" => assert_eq!(r.parsed.probability(), Some(0.95)),
            "probably" => assert_eq!(r.parsed.probability(), Some(0.7)),
            _ => assert!(r.parsed.is_failure()),
        }
    }
}

#[test]
fn warm_cache_issues_no_requests() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let corpus = generate_rq2_corpus(Mode::Standard);
    let g = gateway(MockKind::UniformRandom).with_cache(Cache::open(&path).unwrap());
    let cold = g.run_batch(&corpus).unwrap();
    drop(g);
    let g = gateway(MockKind::UniformRandom).with_cache(Cache::open(&path).unwrap());
    let warm = g.run_batch(&corpus).unwrap();
    assert_eq!(warm.summary.requests_issued, 0);
    assert_eq!(warm.responses, cold.responses);
}

use wepbench_core::domain::{Mode, PromptRecord, TemplateRegistry};
use wepbench_core::jsonl::{read_jsonl, write_jsonl};
use wepbench_core::promptgen::rq1::{generate_rq1_corpus, Rq1Config};
use wepbench_core::promptgen::rq2::generate_rq2_corpus;

#[test]
fn corpora_round_trip_through_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let rq1 = generate_rq1_corpus(TemplateRegistry::builtin(), &Rq1Config::default()).unwrap();
    let rq2 = generate_rq2_corpus(Mode::Cot);
    for (name, corpus) in [("rq1.jsonl", &rq1), ("rq2.jsonl", &rq2)] {
        let path = dir.path().join(name);
        write_jsonl(&path, corpus).unwrap();
        let first = std::fs::read(&path).unwrap();
        let back: Vec<PromptRecord> = read_jsonl(&path).unwrap();
        assert_eq!(&back, corpus);
        write_jsonl(&path, &back).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first, "byte-identical rewrite");
    }
}

#[test]
fn malformed_line_is_reported_with_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    let good = serde_json::to_string(&generate_rq2_corpus(Mode::Standard)[0]).unwrap();
    std::fs::write(&path, format!("{good}\n{{not json\n")).unwrap();
    let err = read_jsonl::<PromptRecord>(&path).unwrap_err().to_string();
    assert!(err.contains("bad.jsonl:2:"), "{err}");
}

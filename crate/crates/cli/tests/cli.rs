//! The `wepbench` binary end to end: outputs, exit codes and determinism.

mod common;

use std::path::Path;

use common::{fake_chat, stderr, stdout, wepbench, write_survey};
use wepbench_cli::comparison::{compare_all, CompareOptions, Source};
use wepbench_core::domain::{wep_registry, PromptRecord, ResponseRecord};
use wepbench_core::jsonl::read_jsonl;
use wepbench_core::stats::BootstrapConfig;

fn lines(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn generate_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = wepbench(d, &["generate", "rq2", "--mode", "standard"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "wrote 360 records to corpus-rq2-standard.jsonl");
    assert_eq!(lines(&d.join("corpus-rq2-standard.jsonl")), 360);

    let o = wepbench(d, &["generate", "rq1", "--settings", "cnc", "--language", "chinese", "--out", "zh.jsonl"]);
    assert!(o.status.success());
    assert_eq!(lines(&d.join("zh.jsonl")), 255);

    let o = wepbench(d, &["generate", "rq1", "--settings", "enc,fcnc", "--out", "ef.jsonl"]);
    assert!(o.status.success());
    assert_eq!(lines(&d.join("ef.jsonl")), 357);

    let o = wepbench(d, &["generate", "rq1", "--exclude", "gen-03:about even", "--out", "x.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(lines(&d.join("x.jsonl")), 782 - 2);
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for out in ["a.jsonl", "b.jsonl"] {
        assert!(wepbench(d, &["generate", "rq2", "--mode", "cot", "--out", out]).status.success());
    }
    assert_eq!(std::fs::read(d.join("a.jsonl")).unwrap(), std::fs::read(d.join("b.jsonl")).unwrap());
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = wepbench(d, &["generate", "rq1", "--settings", "enc", "--language", "chinese"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("CNC"));
    assert_eq!(wepbench(d, &["generate", "rq2", "--settings", "cnc"]).status.code(), Some(1));
    assert_eq!(wepbench(d, &["generate", "rq1", "--mode", "cot"]).status.code(), Some(1));
    assert_eq!(wepbench(d, &["frobnicate"]).status.code(), Some(1));
    assert_eq!(wepbench(d, &["--help"]).status.code(), Some(0));

    assert!(wepbench(d, &["generate", "rq2"]).status.success());
    let o = wepbench(d, &["run", "--corpus", "corpus-rq2-standard.jsonl", "--out", "r.jsonl", "--mock", "oracle"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    for name in ["constant-choice", "sample-calibrated", "gaussian-calibrated", "uniform-random", "survey-median"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn mock_run_then_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wepbench(d, &["generate", "rq2"]).status.success());
    let args = [
        "run", "--corpus", "corpus-rq2-standard.jsonl", "--out", "r.jsonl", "--mock", "sample-calibrated", "--cache",
        "cache.jsonl",
    ];
    let cold = wepbench(d, &args);
    assert!(cold.status.success());
    assert!(stderr(&cold).contains("360 requests issued"));
    assert!(stderr(&cold).contains(" 0 failures"));
    let first = std::fs::read(d.join("r.jsonl")).unwrap();

    let warm = wepbench(d, &args);
    assert!(warm.status.success());
    assert!(stderr(&warm).contains("0 requests issued"), "{}", stderr(&warm));
    assert_eq!(std::fs::read(d.join("r.jsonl")).unwrap(), first);

    let corpus: Vec<PromptRecord> = read_jsonl(&d.join("corpus-rq2-standard.jsonl")).unwrap();
    let responses: Vec<ResponseRecord> = read_jsonl(&d.join("r.jsonl")).unwrap();
    assert_eq!(corpus.len(), responses.len());
    assert!(corpus.iter().zip(&responses).all(|(p, r)| p.id == r.prompt_id));
}

#[test]
fn score_writes_reports_and_rejects_gaps() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wepbench(d, &["generate", "rq2"]).status.success());
    assert!(wepbench(d, &["run", "--corpus", "corpus-rq2-standard.jsonl", "--out", "r.jsonl", "--mock", "constant-choice"])
        .status
        .success());
    let o = wepbench(d, &["score", "--corpus", "corpus-rq2-standard.jsonl", "--responses", "r.jsonl", "--out-dir", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("standard  pairwise                100.00"), "{text}");
    assert!(text.contains("standard  monotonicity            100.00"), "{text}");
    for f in ["scores.json", "scores.csv", "tests.csv", "fig-modes.svg", "fig-choice-sets.svg", "units-standard-pairwise.csv"] {
        assert!(d.join("out").join(f).exists(), "{f}");
    }
    assert_eq!(lines(&d.join("out/units-standard-empirical_monotonicity.csv")), 289);

    let full = std::fs::read_to_string(d.join("r.jsonl")).unwrap();
    let partial: String = full.lines().skip(1).map(|l| format!("{l}\n")).collect();
    std::fs::write(d.join("partial.jsonl"), partial).unwrap();
    let o = wepbench(d, &["score", "--corpus", "corpus-rq2-standard.jsonl", "--responses", "partial.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rq2-height-five_choices-narrow-0.05-below_low-standard"), "{}", stderr(&o));

    let o = wepbench(d, &["score", "--corpus", "corpus-rq2-standard.jsonl", "--responses", "missing.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreachable_backend_exits_three_and_keeps_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wepbench(d, &["generate", "rq2"]).status.success());
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let endpoint = format!("http://127.0.0.1:{port}/v1/chat/completions");
    let o = wepbench(
        d,
        &[
            "run", "--corpus", "corpus-rq2-standard.jsonl", "--out", "r.jsonl", "--endpoint", &endpoint, "--no-auth",
            "--max-retries", "1", "--retry-base-ms", "1", "--parallelism", "8", "--transcript", "t.jsonl",
        ],
    );
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("360 failures"));
    assert_eq!(lines(&d.join("t.jsonl")), 360);
    assert_eq!(lines(&d.join("r.jsonl")), 360);
}

#[test]
fn missing_api_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wepbench(d, &["generate", "rq2"]).status.success());
    let o = wepbench(
        d,
        &["run", "--corpus", "corpus-rq2-standard.jsonl", "--out", "r.jsonl", "--api-key-env", "WEPBENCH_UNSET_KEY_FOR_TEST"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("WEPBENCH_UNSET_KEY_FOR_TEST"));
}

#[test]
fn live_backend_with_key_from_environment() {
    let server = fake_chat(Some("sk-local"));
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wepbench(d, &["generate", "rq2", "--mode", "cot"]).status.success());
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_wepbench"))
        .current_dir(d)
        .env("WEPBENCH_TEST_KEY", "sk-local")
        .args([
            "run", "--corpus", "corpus-rq2-cot.jsonl", "--out", "r.jsonl", "--endpoint", &server.url, "--api-key-env",
            "WEPBENCH_TEST_KEY", "--model", "local-model", "--cache", "c.jsonl",
        ])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let responses: Vec<ResponseRecord> = read_jsonl(&d.join("r.jsonl")).unwrap();
    assert!(responses.iter().all(|r| r.model == "local-model" && r.timestamp.is_some()));
    assert!(responses.iter().all(|r| !r.parsed.is_failure()));
    assert_eq!(server.requests.load(std::sync::atomic::Ordering::SeqCst), 360);
}

#[test]
fn config_file_supplies_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("gen.conf"), "# defaults\nmode = cot\nout = from-config.jsonl\n").unwrap();
    let o = wepbench(d, &["generate", "rq2", "--config", "gen.conf"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(d.join("from-config.jsonl").exists());
    let o = wepbench(d, &["--config", "gen.conf", "generate", "rq2", "--out", "flag.jsonl"]);
    assert!(o.status.success());
    let first = std::fs::read_to_string(d.join("flag.jsonl")).unwrap();
    assert!(first.lines().next().unwrap().contains("-cot\""));

    std::fs::write(d.join("bad.conf"), "colour = blue\n").unwrap();
    assert_eq!(wepbench(d, &["generate", "rq2", "--config", "bad.conf"]).status.code(), Some(1));
}

#[test]
fn compare_survey_median_mock() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_survey(&d.join("survey.csv"));
    assert!(wepbench(d, &["generate", "rq1"]).status.success());
    let o = wepbench(
        d,
        &["run", "--corpus", "corpus-rq1.jsonl", "--out", "med.jsonl", "--mock", "survey-median", "--survey", "survey.csv"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = wepbench(
        d,
        &[
            "compare", "--survey", "survey.csv", "--corpus", "corpus-rq1.jsonl", "--responses", "median=med.jsonl",
            "--resamples", "200", "--out-dir", "cmp",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("cmp/comparison.json")).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    assert!(rows.iter().all(|r| r["amd"] == 0.0), "AMD must be 0 for every WEP");
    assert!(d.join("cmp/fig-kl.svg").exists() && d.join("cmp/fig-distributions.svg").exists());

    let o = wepbench(d, &["compare", "--survey", "survey.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn survey_against_itself_and_disjoint_samples() {
    let opts = CompareOptions {
        bootstrap: BootstrapConfig { resamples: 300, ..BootstrapConfig::default() },
        ..CompareOptions::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("survey.csv");
    write_survey(&path);
    let table = wepbench_core::survey::load_survey(&path).unwrap();
    let human = wepbench_cli::comparison::survey_source(&table).unwrap();
    let mut twin = human.clone();
    twin.label = "again".into();
    let report = compare_all(vec![human, twin], &opts).unwrap();
    for row in &report.rows {
        assert!(row.kl.unwrap().abs() < 1e-9);
        assert!(row.p_value.unwrap() > 0.99, "{}", row.wep);
    }

    let wep = wep_registry()[4].canonical_name.to_string();
    let source = |label: &str, v: f64| Source {
        label: label.into(),
        distributions: [(wep.clone(), vec![v; 15])].into_iter().collect(),
        unparsed: 0,
    };
    let report = compare_all(vec![source("low", 10.0), source("high", 90.0)], &opts).unwrap();
    let row = report.rows.iter().find(|r| r.wep == wep).unwrap();
    assert_eq!(row.ks, Some(1.0));
    assert!(row.p_value.unwrap() < 0.01);
    assert_eq!(report.rows.iter().filter(|r| r.flag.is_some()).count(), 16);
}

#[test]
fn report_needs_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = wepbench(dir.path(), &["report", "--dir", "."]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn baseline_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = wepbench(dir.path(), &["baseline", "--method", "exact", "--out", "b.csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("pairwise                five_choices     20.000"), "{text}");
    assert!(text.contains("monotonicity            three_choices     8.642"), "{text}");
    assert_eq!(lines(&dir.path().join("b.csv")), 13);
}

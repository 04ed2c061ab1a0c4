//! Helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use wepbench_core::domain::wep_registry;

pub fn wepbench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wepbench"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Synthetic survey in long form: 123 respondents, 17 WEPs, answers spread
/// deterministically around a falling centre.
pub fn write_survey(path: &Path) {
    let mut text = String::from("respondent_id,wep,probability\n");
    for r in 1..=123usize {
        for (i, wep) in wep_registry().iter().enumerate() {
            let centre = 95.0 - 5.5 * i as f64;
            let jitter = ((r * 37 + i * 11) % 21) as f64 - 10.0;
            let v = (centre + jitter).clamp(0.0, 100.0).round();
            text.push_str(&format!("r{r},{},{v}\n", wep.canonical_name));
        }
    }
    std::fs::write(path, text).unwrap();
}

/// A chat-completion stand-in. Choice prompts get a letter, chain-of-thought
/// prompts a marked letter, and everything else a probability that varies
/// with the prompt.
pub struct FakeChat {
    pub url: String,
    pub requests: Arc<AtomicUsize>,
}

fn reply_for(body: &str) -> String {
    let request: serde_json::Value = serde_json::from_str(body).unwrap_or_default();
    let prompt = request["messages"][0]["content"].as_str().unwrap_or("");
    if prompt.contains("I choose:") {
        "The proportion is about half. I choose: B".into()
    } else if prompt.contains("descending order of likelihood") {
        "C".into()
    } else {
        let h = prompt.bytes().fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
        format!("{}", (h % 101) as f64 / 100.0)
    }
}

pub fn fake_chat(expected_key: Option<&'static str>) -> FakeChat {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
    let requests = Arc::new(AtomicUsize::new(0));
    let counter = requests.clone();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { break };
            let counter = counter.clone();
            thread::spawn(move || {
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let (mut length, mut auth) = (0, None);
                loop {
                    let mut line = String::new();
                    if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
                        break;
                    }
                    let lower = line.to_ascii_lowercase();
                    if let Some(v) = lower.strip_prefix("content-length:") {
                        length = v.trim().parse().unwrap();
                    }
                    if lower.starts_with("authorization:") {
                        auth = Some(line["authorization:".len()..].trim().to_string());
                    }
                }
                let mut body = vec![0; length];
                reader.read_exact(&mut body).unwrap();
                counter.fetch_add(1, Ordering::SeqCst);
                let authorised = match expected_key {
                    Some(k) => auth.as_deref() == Some(&format!("Bearer {k}")),
                    None => true,
                };
                let (status, reply) = if authorised {
                    let content = reply_for(&String::from_utf8_lossy(&body));
                    (200, serde_json::json!({"choices": [{"message": {"role": "assistant", "content": content}}]}).to_string())
                } else {
                    (401, r#"{"error": "bad key"}"#.to_string())
                };
                let head = format!(
                    "HTTP/1.1 {status} X\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n",
                    reply.len()
                );
                let _ = stream.write_all(head.as_bytes());
                let _ = stream.write_all(reply.as_bytes());
            });
        }
    });
    FakeChat { url, requests }
}

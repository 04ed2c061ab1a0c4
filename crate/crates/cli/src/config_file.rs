//! Optional `key = value` files that mirror command-line flags.
//!
//! Keys are long flag names, with or without the leading dashes, and
//! underscores may stand in for hyphens. `#` starts a comment. A key may
//! repeat for flags that accept several values. Switches take `true` or
//! `false`. Anything given on the command line overrides the file.

use std::ffi::OsString;
use std::path::Path;

use clap::CommandFactory;

use crate::args::Cli;
use crate::error::{CliError, CliResult};

pub fn parse_config(text: &str, path: &Path) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "{}:{}: expected key = value, got {line:?}",
                path.display(),
                i + 1
            )));
        };
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        out.push((key, value));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Appends flags from the `--config` file that the command line leaves
/// unset. Returns `argv` untouched when no config file is named.
pub fn merge_config(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let entries = parse_config(&text, path)?;

    let cli = Cli::command();
    let Some(sub) = argv
        .iter()
        .skip(1)
        .find_map(|a| cli.get_subcommands().find(|s| a.to_str() == Some(s.get_name())))
    else {
        // let clap report the missing subcommand
        return Ok(argv);
    };

    let given: Vec<String> = argv
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();

    let mut out = argv.clone();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        let Some(arg) = sub.get_arguments().find(|a| {
            a.get_long() == Some(key.as_str())
                || a.get_all_aliases().is_some_and(|al| al.contains(&key.as_str()))
        }) else {
            return Err(CliError::Usage(format!(
                "{}: {} has no --{key} flag",
                path.display(),
                sub.get_name()
            )));
        };
        let long = arg.get_long().expect("matched by long name");
        let on_command_line = given.iter().any(|g| {
            g == long || arg.get_all_aliases().is_some_and(|al| al.contains(&g.as_str()))
        });
        if on_command_line {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{long}").into());
            out.push(value.into());
        } else {
            match value.to_ascii_lowercase().as_str() {
                "true" | "yes" | "1" => out.push(format!("--{long}").into()),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}: --{long} is a switch, expected true or false",
                        path.display()
                    )))
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &[&str]) -> Vec<OsString> {
        s.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_comments_and_underscores() {
        let got = parse_config("# run settings\nmock_seed = 3\n--parallelism=2 # inline\n\n", Path::new("c")).unwrap();
        assert_eq!(got, vec![("mock-seed".into(), "3".into()), ("parallelism".into(), "2".into())]);
        assert!(parse_config("no equals here", Path::new("c")).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        std::fs::write(&cfg, "mock = uniform-random\nmock-seed = 9\nparallelism = 3\n").unwrap();
        let merged = merge_config(argv(&[
            "wepbench",
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--mock-seed=1",
            "--corpus",
            "c.jsonl",
        ]))
        .unwrap();
        let s: Vec<String> = merged.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert!(s.ends_with(&["--mock".into(), "uniform-random".into(), "--parallelism".into(), "3".into()]));
        assert!(!s.contains(&"9".to_string()));
    }

    #[test]
    fn unknown_keys_and_switches() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.conf");
        std::fs::write(&cfg, "bogus = 1\n").unwrap();
        let err = merge_config(argv(&["wepbench", "--config", cfg.to_str().unwrap(), "score"])).unwrap_err();
        assert_eq!(err.exit_code(), 1);

        std::fs::write(&cfg, "split_setting = true\nexact-p = false\n").unwrap();
        let merged = merge_config(argv(&["wepbench", "compare", "--config", cfg.to_str().unwrap()])).unwrap();
        assert_eq!(merged.last().unwrap(), "--split-setting");
    }
}

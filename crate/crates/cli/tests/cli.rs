//! Runs every `$ dirichlet ...` line of the README and compares stdout with
//! `tests/golden/`. Numbers are compared with a tolerance so last-digit
//! differences between platforms do not matter. `UPDATE_GOLDEN=1` rewrites
//! the golden files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirichlet"))
}

fn run(args: &[&str], cache: &Path) -> Output {
    bin().args(args).env("DIRICHLET_CACHE_DIR", cache).output().unwrap()
}

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn readme_commands() -> Vec<String> {
    let text = fs::read_to_string(manifest().join("../../README.md")).unwrap();
    text.lines()
        .filter_map(|l| l.strip_prefix("$ dirichlet "))
        .map(|s| s.trim().to_string())
        .collect()
}

fn slug(cmd: &str) -> String {
    let mut out = String::new();
    for c in cmd.chars() {
        if c.is_ascii_alphanumeric() || c == '.' {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_matches('_').to_string()
}

#[derive(Debug, PartialEq)]
enum Token {
    Num(f64),
    Text(String),
}

/// Splits text into signed decimal numbers and everything else.
fn tokens(s: &str) -> Vec<Token> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut text = String::new();
    let mut i = 0;
    while i < b.len() {
        let start = i;
        let mut j = i;
        if b[j] == b'-' || b[j] == b'+' {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j + 1 < b.len() && b[j] == b'.' && b[j + 1].is_ascii_digit() {
                j += 1;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < b.len() && (b[j] == b'e' || b[j] == b'E') {
                let mut k = j + 1;
                if k < b.len() && (b[k] == b'-' || b[k] == b'+') {
                    k += 1;
                }
                if k < b.len() && b[k].is_ascii_digit() {
                    while k < b.len() && b[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            if !text.is_empty() {
                out.push(Token::Text(std::mem::take(&mut text)));
            }
            out.push(Token::Num(s[start..j].parse().unwrap()));
            i = j;
        } else {
            let c = s[i..].chars().next().unwrap();
            text.push(c);
            i += c.len_utf8();
        }
    }
    if !text.is_empty() {
        out.push(Token::Text(text));
    }
    out
}

fn same(got: &str, want: &str) -> Result<(), String> {
    let (g, w) = (tokens(got), tokens(want));
    if g.len() != w.len() {
        return Err(format!("token count {} vs {}", g.len(), w.len()));
    }
    for (a, b) in g.iter().zip(&w) {
        match (a, b) {
            (Token::Num(x), Token::Num(y)) if (x - y).abs() <= 1e-9 * (1.0 + y.abs()) => {}
            (Token::Text(x), Token::Text(y)) if x == y => {}
            _ => return Err(format!("{a:?} vs {b:?}")),
        }
    }
    Ok(())
}

#[test]
fn tokenizer_splits_complex_values() {
    assert_eq!(
        tokens("0.5-2i|1e-17"),
        vec![Token::Num(0.5), Token::Num(-2.0), Token::Text("i|".into()), Token::Num(1e-17)]
    );
    assert_eq!(tokens("AB.AC"), vec![Token::Text("AB.AC".into())]);
    assert!(same("x 1.00000000001", "x 1").is_ok());
    assert!(same("x 1.001", "x 1").is_err());
}

#[test]
fn readme_examples_match_golden_output() {
    let commands = readme_commands();
    assert!(commands.len() >= 15, "found only {} README examples", commands.len());
    let golden = manifest().join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for cmd in &commands {
        let cache = tempfile::tempdir().unwrap();
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let out = run(&args, cache.path());
        assert!(out.status.success(), "`{cmd}` failed: {}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        let path = golden.join(format!("{}.txt", slug(cmd)));
        if update {
            fs::create_dir_all(&golden).unwrap();
            fs::write(&path, &stdout).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if let Err(e) = same(&stdout, &want) {
            failures.push(format!("`{cmd}`: {e}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn exit_codes() {
    let cache = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args, cache.path()).status.code().unwrap();
    assert_eq!(code(&["chars", "--q", "7"]), 0);
    assert_eq!(code(&["chars", "--q", "seven"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["audit", "--claims", "C1,C42"]), 2);
    assert_eq!(code(&["audit"]), 2);
    assert_eq!(code(&["geom"]), 2);
    assert_eq!(code(&["lvalue", "--q", "4", "--char-index", "9", "--s", "2"]), 1);
    assert_eq!(code(&["zeros", "scan", "--t-range", "5,1"]), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("dirichlet.conf");
    fs::write(&conf, "# test\nformat = json\n\nshift = 40\n").unwrap();
    let c = conf.to_str().unwrap();

    let out = run(&["gauss", "--q", "5", "--config", c], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), 4);

    let out = run(&["gauss", "--q", "5", "--config", c, "--format", "csv"], dir.path());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("# gauss_sums\n"));

    fs::write(&conf, "shift = many\n").unwrap();
    assert_eq!(run(&["chars", "--q", "5", "--config", c], dir.path()).status.code(), Some(2));
    fs::write(&conf, "colour = blue\n").unwrap();
    assert_eq!(run(&["chars", "--q", "5", "--config", c], dir.path()).status.code(), Some(2));
}

#[test]
fn scans_fill_the_cache_unless_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let scan = ["zeros", "scan", "--q", "4", "--char-index", "1", "--t-range", "0,12", "--format", "json"];
    let out = run(&scan, dir.path());
    assert!(out.status.success());
    let found: Value = serde_json::from_slice(&out.stdout).unwrap();
    let n = found["tables"][0]["rows"].as_array().unwrap().len();
    assert!(n >= 2);
    let lines = fs::read_to_string(dir.path().join("zeros.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), n);

    let cached = run(&["zeros", "cached", "--q", "4", "--char-index", "1", "--format", "json"], dir.path());
    let v: Value = serde_json::from_slice(&cached.stdout).unwrap();
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), n);

    let other = tempfile::tempdir().unwrap();
    let mut args = scan.to_vec();
    args.push("--no-cache");
    assert!(run(&args, other.path()).status.success());
    assert!(!other.path().join("zeros.jsonl").exists());
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(
        &["audit", "--claims", "C5", "--fixed-clock", "--format", "json", "--output", path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["generated_at"], 0);
    assert_eq!(v["claims"][0]["verdict"], "PASS");
}

#[test]
fn report_matches_documented_top_level_keys() {
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(manifest().join("../../docs/report.schema.json")).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["audit", "--claims", "C5,C6", "--fixed-clock", "--format", "json"], dir.path());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys = |v: &Value| {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let required = |v: &Value| {
        let mut k: Vec<String> = v["required"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
        k.sort();
        k
    };
    assert_eq!(keys(&report), required(&schema));
    assert_eq!(keys(&report["settings"]), required(&schema["properties"]["settings"]));
    for claim in report["claims"].as_array().unwrap() {
        assert_eq!(keys(claim), required(&schema["$defs"]["claim"]));
    }
}

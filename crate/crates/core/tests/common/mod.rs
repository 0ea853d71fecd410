#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary with a clean tolerance environment. `@name` arguments
/// are replaced by the fixture path.
pub fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

pub fn run_env(args: &[&str], eps_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_numevent"));
    cmd.env_remove("NUMEVENT_EPS");
    if let Some(v) = eps_env {
        cmd.env("NUMEVENT_EPS", v);
    }
    for a in args {
        match a.strip_prefix('@') {
            Some(name) => cmd.arg(fixture(name)),
            None => cmd.arg(a),
        };
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// (golden file stem, arguments without `--format`, expected exit code)
pub const GOLDEN_CASES: &[(&str, &[&str], i32)] = &[
    (
        "classify_polarizer_0.1",
        &["classify", "@polarizer_0.1.csv"],
        0,
    ),
    (
        "classify_polarizer_0.3",
        &["classify", "@polarizer_0.3.csv"],
        0,
    ),
    (
        "classify_polarizer_0.7",
        &["classify", "@polarizer_0.7.csv"],
        0,
    ),
    (
        "classify_comparable_pair",
        &["classify", "@comparable_pair.csv"],
        2,
    ),
    ("classify_two_valued", &["classify", "@two_valued.csv"], 0),
    ("classify_boolean8", &["classify", "@boolean8.csv"], 0),
    (
        "classify_improper_difference",
        &["classify", "@improper_difference.csv"],
        2,
    ),
    (
        "classify_improper_member",
        &["classify", "@improper_member.csv"],
        2,
    ),
    ("classify_undecided", &["classify", "@undecided.csv"], 3),
    (
        "boolean_even_1100_1010",
        &["boolean", "@even_1100_1010.json"],
        2,
    ),
    (
        "boolean_even_1100_0011",
        &["boolean", "@even_1100_0011.json"],
        0,
    ),
    ("boolean_power_set", &["boolean", "@power_set.json"], 0),
    (
        "bell_chsh_pairs_only",
        &["bell", "--pairs-only", "@chsh_n3.csv"],
        0,
    ),
    ("bell_chsh_default", &["bell", "@chsh_n3.csv"], 2),
    (
        "bell_chsh_all_valuations",
        &["bell", "--all-valuations", "@chsh_n3.csv"],
        2,
    ),
    (
        "bell_classical_n2_all_valuations",
        &["bell", "--all-valuations", "@classical_n2.csv"],
        0,
    ),
    (
        "bell_classical_n3_all_valuations",
        &["bell", "--all-valuations", "@classical_n3.csv"],
        0,
    ),
    (
        "bell_classical_n4_pairs_only",
        &["bell", "--pairs-only", "@classical_n4.csv"],
        0,
    ),
    ("enumerate_2", &["enumerate", "2"], 0),
    ("enumerate_3", &["enumerate", "3"], 0),
];

pub fn case_args<'a>(args: &[&'a str], format: &'a str) -> Vec<&'a str> {
    let mut v = vec!["--format", format];
    v.extend_from_slice(args);
    v
}

/// Compares every case against its golden files, writing them instead when
/// `update` is set. Returns one message per mismatch.
pub fn check_golden(update: bool) -> Vec<String> {
    let mut problems = Vec::new();
    if update {
        std::fs::create_dir_all(golden_dir()).expect("golden dir");
    }
    for (stem, args, code) in GOLDEN_CASES {
        for (format, ext) in [("text", "txt"), ("json", "json")] {
            let out = run(&case_args(args, format));
            if out.code != *code {
                problems.push(format!(
                    "{stem}.{ext}: exit {} (expected {code}): {}",
                    out.code, out.stderr
                ));
                continue;
            }
            let again = run(&case_args(args, format));
            if again.stdout != out.stdout {
                problems.push(format!("{stem}.{ext}: output differs between runs"));
            }
            let path = golden_dir().join(format!("{stem}.{ext}"));
            if update {
                std::fs::write(&path, &out.stdout).expect("write golden");
                continue;
            }
            match std::fs::read_to_string(&path) {
                Ok(expected) if expected == out.stdout => {}
                Ok(_) => problems.push(format!("{stem}.{ext}: differs from golden file")),
                Err(e) => problems.push(format!("{stem}.{ext}: {e}")),
            }
        }
    }
    problems
}

fn text_field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

fn parse_tuple(s: &str) -> Vec<f64> {
    s.trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(", ")
        .map(|x| x.parse().expect("number"))
        .collect()
}

fn json_values(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().expect("number"))
        .collect()
}

/// `label = (..)` lines under a section header.
fn text_section(text: &str, header: &str) -> Vec<(String, Vec<f64>)> {
    let mut out = Vec::new();
    let mut inside = false;
    for line in text.lines() {
        if line == header {
            inside = true;
            continue;
        }
        if inside {
            let Some(body) = line.strip_prefix("  ") else {
                break;
            };
            let (label, values) = body.split_once(" = ").expect("label = values");
            out.push((label.to_string(), parse_tuple(values)));
        }
    }
    out
}

/// Checks that text and JSON renderings of one case carry the same verdict
/// and the same numbers.
pub fn compare_modes(args: &[&str]) -> Result<(), String> {
    let text = run(&case_args(args, "text"));
    let json = run(&case_args(args, "json"));
    if text.code != json.code {
        return Err(format!("exit codes differ: {} vs {}", text.code, json.code));
    }
    if args[0] == "enumerate" {
        let v: Value = serde_json::from_str(&json.stdout).map_err(|e| e.to_string())?;
        let mut lines = text.stdout.lines();
        let count: u64 = lines
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| "count line")?;
        if v["count"].as_u64() != Some(count) {
            return Err("counts differ".into());
        }
        let rows: Vec<Vec<i64>> = lines
            .skip(1)
            .map(|l| l.split(' ').map(|x| x.parse().unwrap()).collect())
            .collect();
        let json_rows: Vec<Vec<i64>> =
            serde_json::from_value(v["valuations"].clone()).map_err(|e| e.to_string())?;
        return if rows == json_rows {
            Ok(())
        } else {
            Err("valuations differ".into())
        };
    }
    let v: Value = serde_json::from_str(&json.stdout).map_err(|e| format!("invalid JSON: {e}"))?;
    let t = &text.stdout;
    if v["exit_code"].as_i64() != Some(i64::from(json.code)) {
        return Err("exit_code field disagrees with the process".into());
    }
    if text_field(t, "verdict") != v["verdict"].as_str() {
        return Err("verdicts differ".into());
    }
    match args[0] {
        "classify" => {
            if text_field(t, "container") != v["container"].as_str() {
                return Err("containers differ".into());
            }
            let tw = text_section(t, "witnesses:");
            let jw: Vec<(String, Vec<f64>)> = v["witnesses"]
                .as_array()
                .unwrap()
                .iter()
                .map(|w| {
                    (
                        w["label"].as_str().unwrap().to_string(),
                        json_values(&w["values"]),
                    )
                })
                .collect();
            if tw != jw {
                return Err("witnesses differ".into());
            }
        }
        "boolean" => {
            if text_field(t, "missing minimum") != v["missing_minimum"].as_str() {
                return Err("missing minimum differs".into());
            }
            let jw: Vec<(String, Vec<f64>)> = v["witnesses"]
                .as_array()
                .unwrap()
                .iter()
                .map(|w| {
                    (
                        w["label"].as_str().unwrap().to_string(),
                        json_values(&w["values"]),
                    )
                })
                .collect();
            if text_section(t, "witnesses:") != jw {
                return Err("witnesses differ".into());
            }
        }
        "bell" => {
            let rows = v["rows"].as_array().unwrap();
            let text_rows: Vec<&str> = t.lines().filter(|l| l.starts_with("  [")).collect();
            if rows.len() != text_rows.len() {
                return Err("row counts differ".into());
            }
            for (row, line) in rows.iter().zip(text_rows) {
                let min = line
                    .split(" min=")
                    .nth(1)
                    .and_then(|r| r.split(' ').next())
                    .unwrap();
                let max = line
                    .split(" max=")
                    .nth(1)
                    .and_then(|r| r.split(' ').next())
                    .unwrap();
                let violated = line.contains("[FAIL]");
                if min.parse::<f64>().ok() != row["min_value"].as_f64()
                    || max.parse::<f64>().ok() != row["max_value"].as_f64()
                    || Some(violated) != row["violated"].as_bool()
                    || !line.contains(row["inequality"].as_str().unwrap())
                {
                    return Err(format!("row differs: {line}"));
                }
            }
        }
        other => return Err(format!("unknown command {other}")),
    }
    Ok(())
}

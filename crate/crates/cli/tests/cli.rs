use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn credence(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_credence"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn simulate(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "simulate",
        "--out",
        p(out),
        "--items",
        "4",
        "--iterations",
        "3",
    ];
    args.extend_from_slice(extra);
    credence(&args)
}

#[test]
fn simulate_writes_a_self_describing_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let res = credence(&[
        "simulate",
        "--attack",
        "sybil",
        "--attacker-fraction",
        "0.3",
        "--seed",
        "42",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    for f in [
        "summary.txt",
        "series.tsv",
        "item_mae.tsv",
        "credibility_trajectories.tsv",
        "trace.jsonl",
        "config.toml",
        "credibility.tsv",
        "inquiries.tsv",
    ] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    let rows: Vec<&str> = summary.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("sybil\t"));
    let config = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(config.contains("seed = 42"));
    assert!(config.contains("attack = \"sybil\""));
}

#[test]
fn camouflage_series_has_one_row_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cam");
    let res = credence(&[
        "simulate",
        "--attack",
        "camouflage",
        "--switch-iteration",
        "5",
        "--iterations",
        "10",
        "--seed",
        "1",
        "--out",
        p(&out),
    ]);
    assert_eq!(code(&res), 0);
    let series = fs::read_to_string(out.join("series.tsv")).unwrap();
    let lines: Vec<&str> = series.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(lines[0]
        .starts_with("iteration\tmean_mae\tmean_attacker_credibility\tmean_honest_credibility"));
    assert!(lines[10].starts_with("10\t"));
}

#[test]
fn missing_seed_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let res = simulate(&dir.path().join("x"), &[]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("seed"));
    assert!(!dir.path().join("x").exists());
}

#[test]
fn invalid_values_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let res = simulate(
        &dir.path().join("x"),
        &["--seed", "1", "--participation-threshold", "1.5"],
    );
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("participation-threshold"));

    let res = simulate(
        &dir.path().join("x"),
        &["--seed", "1", "--attack", "meteor"],
    );
    assert_eq!(code(&res), 2);

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "seed = 1\nswitch-iteraton = 4\n").unwrap();
    let res = simulate(&dir.path().join("x"), &["--config", p(&cfg)]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("switch-iteraton"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "seed = 5\nattack = \"whitewash\"\nadvisors = 8\nreset-period = 2\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    let res = simulate(&out, &["--config", p(&cfg), "--advisors", "10"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let echoed = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(echoed.contains("seed = 5"));
    assert!(echoed.contains("advisors = 10"));
    assert!(echoed.contains("reset-period = 2"));
    assert!(echoed.contains("attack = \"whitewash\""));
}

#[test]
fn echoed_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a");
    assert_eq!(
        code(&simulate(&first, &["--seed", "11", "--attack", "sybil"])),
        0
    );
    let second = dir.path().join("b");
    let res = credence(&[
        "simulate",
        "--config",
        p(&first.join("config.toml")),
        "--out",
        p(&second),
    ]);
    assert_eq!(code(&res), 0);
    for f in [
        "summary.txt",
        "series.tsv",
        "item_mae.tsv",
        "trace.jsonl",
        "credibility.tsv",
        "inquiries.tsv",
    ] {
        assert_eq!(
            fs::read(first.join(f)).unwrap(),
            fs::read(second.join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn ingest_counts_the_toy_file() {
    let dir = tempfile::tempdir().unwrap();
    let ratings = dir.path().join("ratings.txt");
    fs::write(&ratings, "alice book 5\nalice lamp 2\nbob book 4\n").unwrap();
    let out = dir.path().join("ing");
    let res = credence(&["ingest", "--ratings", p(&ratings), "--out", p(&out)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let stats = fs::read_to_string(out.join("stats.txt")).unwrap();
    assert_eq!(
        stats.lines().next(),
        Some("2 users, 2 items, 3 reviews, 0 skipped")
    );
    assert!(out.join("items.tsv").is_file());
    let index = fs::read_to_string(out.join("users.tsv")).unwrap();
    assert_eq!(index.lines().count(), 3);
}

#[test]
fn ingest_reports_one_skipped_line() {
    let dir = tempfile::tempdir().unwrap();
    let ratings = dir.path().join("ratings.txt");
    let mut text: String = (0..9)
        .map(|i| format!("u{} i{} {}\n", i % 3, i % 4, i % 5 + 1))
        .collect();
    text.push_str("this line is broken\n");
    fs::write(&ratings, text).unwrap();
    let out = dir.path().join("ing");
    let res = credence(&["ingest", "--ratings", p(&ratings), "--out", p(&out)]);
    assert_eq!(code(&res), 0);
    assert!(String::from_utf8_lossy(&res.stdout).contains("1 skipped"));
}

#[test]
fn ingest_of_a_missing_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let res = credence(&[
        "ingest",
        "--ratings",
        p(&dir.path().join("nope.txt")),
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&res), 2);
}

#[test]
fn report_merges_attack_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let mut dirs = Vec::new();
    for attack in ["sybil", "camouflage", "whitewash"] {
        let out = dir.path().join(attack);
        assert_eq!(
            code(&simulate(&out, &["--seed", "3", "--attack", attack])),
            0
        );
        dirs.push(out);
    }
    let mut args = vec!["report"];
    args.extend(dirs.iter().map(|d| p(d)));
    let res = credence(&args);
    assert_eq!(code(&res), 0);
    let table = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("sybil\t"));
    assert!(lines[2].starts_with("camouflage\t"));
    assert!(lines[3].starts_with("whitewash\t"));
}

#[test]
fn report_suffixes_duplicate_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("run-a");
    let b = dir.path().join("run-b");
    assert_eq!(
        code(&simulate(&a, &["--seed", "1", "--attack", "sybil"])),
        0
    );
    assert_eq!(
        code(&simulate(&b, &["--seed", "2", "--attack", "sybil"])),
        0
    );
    let res = credence(&["report", p(&a), p(&b)]);
    assert_eq!(code(&res), 0);
    let table = String::from_utf8(res.stdout).unwrap();
    assert!(table.contains("sybil#run-a\t"));
    assert!(table.contains("sybil#run-b\t"));
}

#[test]
fn report_needs_summaries() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&credence(&["report"])), 2);
    assert_eq!(code(&credence(&["report", p(dir.path())])), 2);
}

mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use ddar::cli::{run, Cli};
use serde_json::Value;

use common::corpus_dir;

fn ddar(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("ddar").chain(args.iter().copied())).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).to_string_lossy().into_owned()
}

fn strip_metadata(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("metadata");
    v
}

#[test]
fn solve_exit_codes() {
    let (code, out, _) = ddar(&["solve", &corpus_file("midline.txt")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("outcome: goal_proven"));
    assert_eq!(ddar(&["solve", &corpus_file("simson.txt")]).0, 1);
    assert_eq!(ddar(&["solve", &corpus_file("varignon.txt"), "--timeout", "0.000001"]).0, 2);
    assert_eq!(ddar(&["solve", &corpus_file("intersecting_chords.txt"), "--law-of-sines"]).0, 0);
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a = free\nb = frob a\n? coll a a b\n").unwrap();
    let (code, _, err) = ddar(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("unknown constructor `frob`"), "{err}");

    let missing = dir.path().join("missing.txt");
    assert_eq!(ddar(&["solve", missing.to_str().unwrap()]).0, 3);
    assert_eq!(ddar(&["solve", &corpus_file("midline.txt"), "--timeout=-1"]).0, 3);
    assert_eq!(ddar(&["solve", &corpus_file("midline.txt"), "--catalog", missing.to_str().unwrap()]).0, 3);
}

#[test]
fn solve_then_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["midline.txt", "pythagoras.txt", "kite.txt", "orthocenter.txt"] {
        let out = dir.path().join(format!("{name}.json"));
        let (code, _, _) = ddar(&["solve", &corpus_file(name), "--json", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        let (code, out_text, err) = ddar(&["check", out.to_str().unwrap(), &corpus_file(name)]);
        assert_eq!(code, 0, "{name}: {err}");
        assert_eq!(out_text.trim(), "ok");
    }
}

#[test]
fn check_rejects_truncated_and_tampered_proofs() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("p.json");
    let problem = corpus_file("pythagoras.txt");
    assert_eq!(ddar(&["solve", &problem, "--json", "--out", proof.to_str().unwrap()]).0, 0);
    let text = fs::read_to_string(&proof).unwrap();

    let truncated = dir.path().join("t.json");
    fs::write(&truncated, &text[..text.len() / 2]).unwrap();
    let (code, _, err) = ddar(&["check", truncated.to_str().unwrap(), &problem]);
    assert_eq!(code, 1);
    assert!(err.contains("parse error"), "{err}");

    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let steps = doc["proof"]["steps"].as_array_mut().unwrap();
    let last = steps.last_mut().unwrap();
    last["justification"]["certificates"][0]["combination"][0][1] = Value::String("7".into());
    let tampered = dir.path().join("x.json");
    fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let (code, _, err) = ddar(&["check", tampered.to_str().unwrap(), &problem]);
    assert_eq!(code, 1);
    assert!(err.contains("certificate"), "{err}");
}

#[test]
fn solve_json_is_bit_stable() {
    let a = ddar(&["solve", &corpus_file("orthocenter.txt"), "--json", "--dump-diagram"]).1;
    let b = ddar(&["solve", &corpus_file("orthocenter.txt"), "--json", "--dump-diagram"]).1;
    assert_eq!(strip_metadata(&a), strip_metadata(&b));
    assert!(strip_metadata(&a)["diagram"].is_object());
}

#[test]
fn bench_matches_manifest_and_is_deterministic() {
    let dir = corpus_dir();
    let manifest = dir.join("manifest.json");
    let args = |extra: &[&'static str]| {
        let mut v = vec!["bench", dir.to_str().unwrap(), "--json", "--manifest", manifest.to_str().unwrap()];
        v.extend_from_slice(extra);
        v.into_iter().map(str::to_owned).collect::<Vec<_>>()
    };
    let go = |a: Vec<String>| {
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        ddar(&refs)
    };
    let (code, one, err) = go(args(&["--jobs", "1"]));
    assert_eq!(code, 0, "{err}");
    let (code, many, _) = go(args(&["--jobs", "4"]));
    assert_eq!(code, 0);
    assert_eq!(strip_metadata(&one), strip_metadata(&many));

    let report = strip_metadata(&one);
    assert_eq!(report["aggregate"]["problems"], 14);
    assert_eq!(report["aggregate"]["solved"], 12);
    let (code, sines, _) = go(args(&["--law-of-sines"]));
    assert_eq!(code, 0);
    assert_eq!(strip_metadata(&sines)["aggregate"]["solved"], 13);
}

#[test]
fn bench_aggregate_is_the_fold_of_rows() {
    let dir = corpus_dir();
    let catalog = ddar::matcher::builtin_catalog();
    let cfg = ddar::engine::SolverConfig::default();
    let report = ddar::cli::bench_dir(&dir, &catalog, &cfg, 2, None).unwrap();
    let solved = report.rows.iter().filter(|r| r.outcome == "goal_proven").count();
    assert_eq!(report.aggregate.solved, solved);
    assert_eq!(report.aggregate.problems, report.rows.len());
    let matching: std::time::Duration = report.rows.iter().map(|r| r.times.matching).sum();
    assert_eq!(report.aggregate.times.matching, matching);
}

#[test]
fn bench_empty_dir_and_manifest_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = ddar(&["bench", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(strip_metadata(&out)["rows"].as_array().unwrap().len(), 0);

    fs::copy(corpus_dir().join("simson.txt"), dir.path().join("simson.txt")).unwrap();
    fs::write(dir.path().join("broken.txt"), "a = free\n").unwrap();
    let manifest = dir.path().join("m.json");
    fs::write(
        &manifest,
        r#"{"problems":[{"file":"simson.txt","role":"baseline","expected":"goal_proven","expected_with_sines":"goal_proven"}]}"#,
    )
    .unwrap();
    let (code, out, err) = ddar(&["bench", dir.path().to_str().unwrap(), "--manifest", manifest.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("simson.txt: expected goal_proven, got saturated"), "{err}");
    // the broken file is recorded, not fatal
    assert!(out.contains("broken.txt") && out.contains("error"), "{out}");
}

#[test]
fn binary_reads_environment_overrides() {
    let bin = env!("CARGO_BIN_EXE_ddar");
    let file = corpus_file("varignon.txt");
    let status = Command::new(bin)
        .args(["solve", &file])
        .env("DDAR_TIMEOUT", "0.000001")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let ok = Command::new(bin).args(["solve", &file]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(Path::new(bin).exists());
}

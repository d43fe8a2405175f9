//! End-to-end pipeline runs of the bundled toy fixture through the
//! compiled binary: validate → label → pairs → predict → evaluate →
//! report, plus exit-code and strict-mode behavior.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use suiteval::pairsio::read_pairs;
use suiteval_core::presentation_order;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suiteval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

/// Runs label → pairs for the toy fixture into `dir`, returning the pairs
/// path.
fn label_and_pair(dir: &Path, with_overrides: bool) -> PathBuf {
    let labels = dir.join("toy.lab.tsv");
    let pairs = dir.join("toy.pairs.tsv");
    let mut args = vec![
        "label".to_string(),
        "--suite".into(),
        p(&fixture("toy.suite.tsv")),
        "--hypotheses".into(),
        p(&fixture("toy.hyp.tsv")),
        "--out".into(),
        p(&labels),
    ];
    if with_overrides {
        args.push("--overrides".into());
        args.push(p(&fixture("toy.ovr.tsv")));
    }
    run_ok(&args.iter().map(String::as_str).collect::<Vec<_>>());
    run_ok(&[
        "pairs",
        "--suite",
        &p(&fixture("toy.suite.tsv")),
        "--hypotheses",
        &p(&fixture("toy.hyp.tsv")),
        "--labels",
        &p(&labels),
        "--out",
        &p(&pairs),
    ]);
    pairs
}

#[test]
fn validate_reports_suite_shape() {
    let stdout = run_ok(&["validate", "--suite", &p(&fixture("toy.suite.tsv"))]);
    assert_eq!(stdout.trim(), "6 items, 4 categories");
}

#[test]
fn validate_rejects_duplicate_id_and_bad_rule() {
    let dir = tempfile::tempdir().unwrap();
    let header = "id\tcategory\tsubcategory\tsource\tpositive_regex\tnegative_regex\tflags\tnotes\n";

    let dup = dir.path().join("dup.suite.tsv");
    fs::write(&dup, format!("{header}x\tA\t\ts\ta\t\t\t\nx\tA\t\ts\tb\t\t\t\n")).unwrap();
    let out = run(&["validate", "--suite", &p(&dup)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x"));

    let bad = dir.path().join("bad.suite.tsv");
    fs::write(&bad, format!("{header}item-9\tA\t\ts\t(\t\t\t\n")).unwrap();
    let out = run(&["validate", "--suite", &p(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("item-9") && stderr.contains("positive"), "{stderr}");
}

#[test]
fn overrides_change_the_pair_set() {
    let with = tempfile::tempdir().unwrap();
    let without = tempfile::tempdir().unwrap();
    // With the manual override neg-01 has one pass and one fail; without
    // it both outputs pass and the item contributes no pair.
    let pairs_with = read_pairs(&label_and_pair(with.path(), true)).unwrap();
    let pairs_without = read_pairs(&label_and_pair(without.path(), false)).unwrap();
    assert_eq!(pairs_with.len(), 6);
    assert_eq!(pairs_without.len(), 5);
    assert!(pairs_with.iter().any(|pr| pr.item_id == "neg-01"));
    assert!(!pairs_without.iter().any(|pr| pr.item_id == "neg-01"));
}

#[test]
fn constant_tie_external_adapter_scores_chance() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = label_and_pair(dir.path(), true);
    let preds = dir.path().join("tie.pred.tsv");
    run_ok(&[
        "predict",
        "--pairs",
        &p(&pairs),
        "--adapter",
        "external",
        "--command",
        &p(&fixture("echo_tie.sh")),
        "--system-name",
        "always-tie",
        "--out",
        &p(&preds),
    ]);

    for (policy, expected) in [("half_credit", "50.0"), ("incorrect", "0.0")] {
        let eval = dir.path().join(format!("tie.{policy}.eval.json"));
        let stdout = run_ok(&[
            "evaluate",
            "--pairs",
            &p(&pairs),
            "--predictions",
            &p(&preds),
            "--tie-policy",
            policy,
            "--out",
            &p(&eval),
        ]);
        assert_eq!(
            stdout.trim(),
            format!("always-tie: total {expected}, weighed {expected}")
        );
    }
}

#[test]
fn score_file_oracle_reaches_full_accuracy_in_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let pairs_path = label_and_pair(dir.path(), true);
    let pairs = read_pairs(&pairs_path).unwrap();
    let seed = 7;

    // An oracle score file: the presented side holding the passing text
    // gets the higher score.
    let mut scores = String::from("pair_id\tside\tscore\n");
    for pres in presentation_order(&pairs, seed) {
        let (a, b) = if pres.a_is_passing { (1, 0) } else { (0, 1) };
        scores.push_str(&format!("{id}\tA\t{a}\n{id}\tB\t{b}\n", id = pres.pair_id));
    }
    let scores_path = dir.path().join("oracle.scores.tsv");
    fs::write(&scores_path, scores).unwrap();

    let preds = dir.path().join("oracle.pred.tsv");
    run_ok(&[
        "predict",
        "--pairs",
        &p(&pairs_path),
        "--adapter",
        "score-file",
        "--scores",
        &p(&scores_path),
        "--seed",
        "7",
        "--system-name",
        "oracle",
        "--out",
        &p(&preds),
    ]);
    let eval = dir.path().join("oracle.eval.json");
    let stdout = run_ok(&[
        "evaluate",
        "--pairs",
        &p(&pairs_path),
        "--predictions",
        &p(&preds),
        "--seed",
        "7",
        "--out",
        &p(&eval),
    ]);
    assert_eq!(stdout.trim(), "oracle: total 100.0, weighed 100.0");

    for format in ["text", "tsv", "json", "markdown"] {
        let report = dir.path().join(format!("report.{format}"));
        run_ok(&[
            "report",
            "--evaluation",
            &p(&eval),
            "--format",
            format,
            "--out",
            &p(&report),
        ]);
        let text = fs::read_to_string(&report).unwrap();
        assert!(text.contains("100.0"), "{format}: {text}");
    }
    // The tsv report splits the verb subtable into a sibling file.
    assert!(dir.path().join("report.verb_tense_aspect_mood.tsv").exists());
}

#[test]
fn train_and_internal_adapter_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = label_and_pair(dir.path(), true);
    let model = dir.path().join("toy.model.json");
    let stdout = run_ok(&["train", "--pairs", &p(&pairs), "--out", &p(&model)]);
    assert!(stdout.contains("trained on 6 pairs"), "{stdout}");

    let preds = dir.path().join("internal.pred.tsv");
    run_ok(&[
        "predict",
        "--pairs",
        &p(&pairs),
        "--adapter",
        "internal",
        "--model",
        &p(&model),
        "--system-name",
        "baseline",
        "--out",
        &p(&preds),
    ]);
    let eval = dir.path().join("internal.eval.json");
    let stdout = run_ok(&[
        "evaluate",
        "--pairs",
        &p(&pairs),
        "--predictions",
        &p(&preds),
        "--out",
        &p(&eval),
    ]);
    assert!(stdout.starts_with("baseline: total "), "{stdout}");
}

#[test]
fn strict_mode_catches_tampered_inputs() {
    let dir = tempfile::tempdir().unwrap();
    // Copy the hypotheses so they can be modified after labeling.
    let hyp = dir.path().join("toy.hyp.tsv");
    fs::copy(fixture("toy.hyp.tsv"), &hyp).unwrap();
    let labels = dir.path().join("toy.lab.tsv");
    run_ok(&[
        "label",
        "--suite",
        &p(&fixture("toy.suite.tsv")),
        "--hypotheses",
        &p(&hyp),
        "--out",
        &p(&labels),
    ]);

    let mut content = fs::read_to_string(&hyp).unwrap();
    content.push_str("pnc-01\tS4\tneural\tWhat!\n");
    fs::write(&hyp, content).unwrap();

    let out = run(&[
        "pairs",
        "--suite",
        &p(&fixture("toy.suite.tsv")),
        "--hypotheses",
        &p(&hyp),
        "--labels",
        &p(&labels),
        "--strict",
        "--out",
        &p(&dir.path().join("toy.pairs.tsv")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("manifest mismatch"));
}

#[test]
fn failing_external_command_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = label_and_pair(dir.path(), true);
    let out = run(&[
        "predict",
        "--pairs",
        &p(&pairs),
        "--adapter",
        "external",
        "--command",
        "false",
        "--out",
        &p(&dir.path().join("x.pred.tsv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_upstream_file_names_the_path() {
    let out = run(&[
        "pairs",
        "--suite",
        &p(&fixture("toy.suite.tsv")),
        "--hypotheses",
        &p(&fixture("toy.hyp.tsv")),
        "--labels",
        "/nonexistent/toy.lab.tsv",
        "--out",
        "/tmp/unused.pairs.tsv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/toy.lab.tsv"));
}

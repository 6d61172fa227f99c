use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn iqakit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iqakit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn natural() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata/natural")
}

#[test]
fn distort_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = natural().join("chelsea.png");
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        stdout(&iqakit(&[
            "distort", "--input", s(&input), "--sub", "gaussian_noise_rgb", "--level", "3", "--seed", seed,
            "--output", s(&out),
        ]));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.png", "5"), run("b.png", "5"));
    assert_ne!(run("a.png", "5"), run("c.png", "6"));
}

#[test]
fn distort_reports_resolved_params() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j.jpg");
    let text = stdout(&iqakit(&[
        "distort", "--input", s(&natural().join("coffee.png")), "--sub", "jpeg", "--level", "5", "--output",
        s(&out),
    ]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["params"], json!({"kind": "jpeg", "quality": 5}));
    assert!(out.exists());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = natural().join("rocket.png");
    let out = dir.path().join("x.png");
    let bad_sub = iqakit(&["distort", "--input", s(&input), "--sub", "nope", "--level", "1", "--output", s(&out)]);
    assert_eq!(bad_sub.status.code(), Some(2));
    let bad_level = iqakit(&["distort", "--input", s(&input), "--sub", "jpeg", "--level", "9", "--output", s(&out)]);
    assert_eq!(bad_level.status.code(), Some(2));
    let missing = iqakit(&["score", "--groups", s(&dir.path().join("none.jsonl")), "--oracle", "--out", s(&out)]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown_flag = iqakit(&["catalog", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.png");
    let config = dir.path().join("c.json");
    let cfg = json!({
        "input": natural().join("astronaut.png"), "sub": "jpeg", "level": 1, "output": out,
    });
    std::fs::write(&config, cfg.to_string()).unwrap();
    let text = stdout(&iqakit(&["distort", "--config", s(&config), "--level", "4"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["level"], 4);
    assert_eq!(v["params"]["quality"], 8);
}

#[test]
fn build_writes_records_and_images() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("d.jsonl");
    let text = stdout(&iqakit(&[
        "build", "--refs", s(&natural()), "--task", "identification", "--setting", "full-reference", "--count",
        "12", "--seed", "3", "--out", s(&gold),
    ]));
    let summary: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(summary["records"], 12);
    let lines: Vec<Value> = std::fs::read_to_string(&gold)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 12);
    for r in &lines {
        let a = r["image_refs"]["image_a"].as_str().unwrap();
        assert!(gold.parent().unwrap().join(a).exists() || Path::new(a).exists(), "{a}");
    }
}

#[test]
fn rating_build_without_mos_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = iqakit(&[
        "build", "--refs", s(&natural()), "--task", "instant-rating", "--count", "4", "--out",
        s(&dir.path().join("d.jsonl")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn write_groups(dir: &Path, n: usize) -> PathBuf {
    let images: Vec<Value> = (0..n).map(|k| json!({"id": format!("i{k}"), "mos": k as f64 * 0.3})).collect();
    let path = dir.join("groups.jsonl");
    std::fs::write(&path, format!("{}\n", json!({"group_id": "g0", "images": images}))).unwrap();
    path
}

#[test]
fn oracle_scoring_recovers_order() {
    let dir = tempfile::tempdir().unwrap();
    let groups = write_groups(dir.path(), 10);
    let csv = dir.path().join("scores.csv");
    let report: Value = serde_json::from_str(&stdout(&iqakit(&[
        "score", "--groups", s(&groups), "--oracle", "--eps", "0", "--out", s(&csv),
    ])))
    .unwrap();
    assert_eq!(report["mean_srcc"], 1.0);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(table.starts_with("image_id,score,comparisons_used\n"));
    assert_eq!(table.lines().count(), 11);
}

#[test]
fn unweighted_scoring_with_few_comparisons_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let groups = write_groups(dir.path(), 10);
    let out = iqakit(&[
        "score", "--groups", s(&groups), "--oracle", "--strategy", "random-k", "--k", "1", "--weighting",
        "unweighted", "--out", s(&dir.path().join("s.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let ok = iqakit(&[
        "score", "--groups", s(&groups), "--oracle", "--strategy", "random-k", "--k", "1", "--out",
        s(&dir.path().join("s.csv")),
    ]);
    stdout(&ok);
}

/// Builds a rating dataset from a tiny MOS table and returns its path.
fn rating_gold(dir: &Path) -> PathBuf {
    let mut csv = String::from("image_path,reference_path,content_group_id,mos\n");
    for (k, name) in ["astronaut", "chelsea", "coffee", "motorcycle"].iter().enumerate() {
        let p = natural().join(format!("{name}.png"));
        csv.push_str(&format!("{},,g,{}\n", p.display(), k + 1));
    }
    let mos = dir.join("mos.csv");
    std::fs::write(&mos, csv).unwrap();
    let gold = dir.join("rating.jsonl");
    stdout(&iqakit(&[
        "build", "--task", "instant-rating", "--setting", "non-reference", "--mos", s(&mos), "--count", "20",
        "--seed", "1", "--out", s(&gold),
    ]));
    gold
}

fn gold_records(gold: &Path) -> Vec<Value> {
    std::fs::read_to_string(gold)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn eval(pred: &Path, gold: &Path, format: &str) -> String {
    stdout(&iqakit(&[
        "eval", "--pred", s(pred), "--gold", s(gold), "--task", "instant-rating", "--report", format,
    ]))
}

#[test]
fn eval_scores_gold_answers_perfectly_and_flips_halfway() {
    let dir = tempfile::tempdir().unwrap();
    let gold = rating_gold(dir.path());
    let records = gold_records(&gold);
    let answer = |r: &Value| r["response"].as_str().unwrap().to_string();

    let perfect = dir.path().join("perfect.jsonl");
    let lines: Vec<String> = records.iter().map(|r| json!({"id": r["id"], "text": answer(r)}).to_string()).collect();
    std::fs::write(&perfect, lines.join("\n")).unwrap();
    let report: Value = serde_json::from_str(&eval(&perfect, &gold, "json")).unwrap();
    assert_eq!(report["metrics"]["accuracy"], 1.0);

    let half = dir.path().join("half.jsonl");
    let lines: Vec<String> = records
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let a = answer(r);
            let text = if k % 2 == 0 {
                a
            } else if a.contains("Image A") {
                a.replace("Image A", "Image B")
            } else {
                a.replace("Image B", "Image A")
            };
            json!({"id": r["id"], "text": text}).to_string()
        })
        .collect();
    std::fs::write(&half, lines.join("\n")).unwrap();
    let report: Value = serde_json::from_str(&eval(&half, &gold, "json")).unwrap();
    assert_eq!(report["metrics"]["accuracy"], 0.5);

    let table = eval(&half, &gold, "table");
    assert_eq!(table, eval(&half, &gold, "table"));
    assert!(table.contains("unparseable: 0/20"), "{table}");
}

#[test]
fn eval_rejects_missing_predictions() {
    let dir = tempfile::tempdir().unwrap();
    let gold = rating_gold(dir.path());
    let pred = dir.path().join("p.jsonl");
    std::fs::write(&pred, "").unwrap();
    let out = iqakit(&["eval", "--pred", s(&pred), "--gold", s(&gold), "--task", "instant-rating"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no prediction for"));
}

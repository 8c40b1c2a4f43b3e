use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hera(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hera")).args(args).current_dir(dir).env("SOURCE_DATE_EPOCH", "1700000000").output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = hera(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    ok(&["blobs", "--n", "60", "--d", "3", "--q", "3", "--seed", "4", "--out", "clean.pll"], dir.path());
    dir
}

#[test]
fn corrupt_train_eval_are_byte_identical_on_rerun() {
    let dirs = [setup(), setup()];
    let mut outputs = Vec::new();
    for dir in &dirs {
        let p = dir.path();
        let s1 = ok(&["corrupt", "--in", "clean.pll", "--out", "c.pll", "--p", "0.5", "--r", "1", "--seed", "9"], p);
        let s2 = ok(&["train", "--data", "c.pll", "--out", "m.model", "--iter-max", "30"], p);
        let s3 = ok(&["eval", "--data", "c.pll", "--folds", "3", "--seed", "2", "--iter-max", "30", "--out", "r.jsonl"], p);
        let files: Vec<Vec<u8>> =
            ["c.pll", "m.model", "m.model.log", "r.jsonl"].iter().map(|f| fs::read(p.join(f)).unwrap()).collect();
        outputs.push((s1, s2, s3, files));
    }
    assert_eq!(outputs[0], outputs[1]);
    let (summary, train, eval, _) = &outputs[0];
    assert_eq!(summary.trim(), "n=60 q=3 corrupted=30 mean_candidates=1.500");
    assert!(train.starts_with("iterations\t30\n"));
    assert!(eval.starts_with("HERA\t"));
}

#[test]
fn train_writes_model_and_log() {
    let dir = setup();
    let p = dir.path();
    ok(&["train", "--data", "clean.pll", "--out", "m.model", "--iter-max", "0"], p);
    let model = hera::load_model(p.join("m.model")).unwrap();
    let ds = hera::load_dataset(p.join("clean.pll")).unwrap();
    assert!(model.weights.iter().all(|&v| v == 0.0));
    assert_eq!(model.confidence, ds.candidates);
    assert_eq!(model.hyperparams.iter_max, 0);
    assert_eq!(fs::read_to_string(p.join("m.model.log")).unwrap().lines().count(), 1);

    ok(&["train", "--data", "clean.pll", "--out", "m.model", "--iter-max", "5", "--alpha", "0.2"], p);
    let log = fs::read_to_string(p.join("m.model.log")).unwrap();
    let lines: Vec<&str> = log.lines().collect();
    assert!(lines[0].starts_with('#'));
    assert_eq!(lines.len(), 6);
    assert!(lines[1..].iter().all(|l| l.split('\t').count() == 6));
    assert_eq!(hera::load_model(p.join("m.model")).unwrap().hyperparams.alpha, 0.2);

    let labels = ok(&["predict", "--data", "clean.pll", "--model", "m.model", "--query", "clean.pll"], p);
    assert_eq!(labels.lines().count(), 60);
    assert!(labels.lines().all(|l| matches!(l, "1" | "2" | "3")));
}

#[test]
fn eval_prints_row_and_folds() {
    let dir = setup();
    let p = dir.path();
    let out = ok(&["eval", "--data", "clean.pll", "--folds", "4", "--seed", "1", "--baseline", "plknn", "--out", "r.jsonl"], p);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("PL-KNN\t"));
    assert_eq!(lines[1].split('\t').nth(1).unwrap().split(' ').count(), 4);
    let record: serde_json::Value = serde_json::from_str(fs::read_to_string(p.join("r.jsonl")).unwrap().trim()).unwrap();
    assert_eq!(record["method"], "PL-KNN");
    assert_eq!(record["folds"], 4);
    assert_eq!(record["timestamp"], 1700000000u64);
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = setup();
    let p = dir.path();
    let args = [
        "sweep", "--data", "clean.pll", "--protocol", "r1", "--grid", "0.1,0.5", "--folds", "3", "--seed", "1", "--out",
        "t.tsv", "--iter-max", "20", "--records", "s.jsonl",
    ];
    let printed = ok(&args, p);
    let table = fs::read_to_string(p.join("t.tsv")).unwrap();
    assert_eq!(printed, table);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("0.1\t"));
    assert_eq!(fs::read_to_string(p.join("s.jsonl")).unwrap().lines().count(), 4);
    assert_eq!(ok(&args, p), table);
}

#[test]
fn exit_codes() {
    let dir = setup();
    let p = dir.path();
    assert_eq!(hera(&["train"], p).status.code(), Some(2));
    assert_eq!(hera(&["corrupt", "--in", "missing.pll", "--out", "x.pll"], p).status.code(), Some(3));
    ok(&["corrupt", "--in", "clean.pll", "--out", "c.pll", "--p", "0.2", "--seed", "1"], p);
    let text = fs::read_to_string(p.join("c.pll")).unwrap();
    let untruthed = text.split("TRUTH").next().unwrap();
    fs::write(p.join("u.pll"), untruthed).unwrap();
    let out = hera(&["corrupt", "--in", "u.pll", "--out", "y.pll", "--p", "0.2"], p);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(hera(&["eval", "--data", "u.pll"], p).status.code(), Some(3));
    assert_eq!(hera(&["train", "--data", "clean.pll", "--out", "m", "--tau", "0.5"], p).status.code(), Some(2));
    assert_eq!(hera(&["corrupt", "--in", "clean.pll", "--out", "z.pll", "--p", "0.2", "--r", "3"], p).status.code(), Some(2));
}

#[test]
fn convert_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("x.csv"), "0.5,1\n-1,2\n3,0.25\n").unwrap();
    fs::write(p.join("y.csv"), "1 2\n2\n1,3\n").unwrap();
    fs::write(p.join("t.csv"), "2\n2\n3\n").unwrap();
    let out = ok(&["convert", "--csv", "x.csv", "y.csv", "--truth", "t.csv", "--out", "d.pll"], p);
    assert_eq!(out.trim(), "n=3 d=2 q=3");
    let ds = hera::load_dataset(p.join("d.pll")).unwrap();
    assert_eq!(ds.candidate_set(2), vec![0, 2]);
    assert_eq!(ds.ground_truth, Some(vec![1, 1, 2]));
}

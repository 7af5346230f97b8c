//! The `vbqc` binary end to end: exit status 0 on accept, 2 on abort, 1 on
//! bad input, and the files it writes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn vbqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vbqc"))
        .args(args)
        .env("VBQC_THREADS", "2")
        .output()
        .expect("spawn vbqc")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn honest_run_accepts_and_writes_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "n = 4000\nseed = 3\nx1 = 1\noutput_dir = \"out\"\n");
    let out = vbqc(&["run", cfg.to_str().unwrap(), "--blindness"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("out");
    let s = summary(&dir);
    assert_eq!(s["verdict"], "accept");
    assert_eq!(s["output"], 1);
    assert!(s["F_2q"].is_null() && s["blindness"]["F_2q"].as_f64().unwrap() >= 0.98);

    let rounds = fs::read_to_string(dir.join("rounds.jsonl")).unwrap();
    assert_eq!(rounds.lines().count(), 4000);

    let mut rdr = csv::Reader::from_path(dir.join("histogram.csv")).unwrap();
    let mut total = 0u64;
    let mut prob = [0.0f64; 2];
    for rec in rdr.records() {
        let rec = rec.unwrap();
        total += rec[3].parse::<u64>().unwrap();
        prob[(&rec[0] == "computation") as usize] += rec[4].parse::<f64>().unwrap();
    }
    assert_eq!(total, 4000);
    assert!(prob.iter().all(|p| (p - 1.0).abs() < 1e-12));

    let matrices = fs::read_to_string(dir.join("blindness_matrices.csv")).unwrap();
    assert_eq!(matrices.lines().count(), 65);
    assert!(dir.join("blindness.json").exists());
}

#[test]
fn adversary_override_aborts_with_status_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "n = 2000\nseed = 3\n");
    let out_dir = tmp.path().join("adv");
    let out = vbqc(&[
        "run",
        cfg.to_str().unwrap(),
        "--adversary",
        "angle-tamper:q2=4",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let s = summary(&out_dir);
    assert_eq!(s["verdict"], "abort");
    assert!(s["epsilon"].as_f64().unwrap() > 0.18);
    assert_eq!(s["overrides"]["adversary"], "angle-tamper:q2=4");
}

#[test]
fn bad_input_exits_1_with_a_field_name() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "n = 100\nseed = 1\nomega = 0.3\n");
    let out = vbqc(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega"));

    let missing = tmp.path().join("nope.toml");
    let out = vbqc(&["run", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.toml"));
}

#[test]
fn reruns_are_identical_except_wall_clock() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "n = 3000\nseed = 99\n");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "4"].into_iter().enumerate() {
        let dir = tmp.path().join(format!("r{i}"));
        let out = Command::new(env!("CARGO_BIN_EXE_vbqc"))
            .args(["run", cfg.to_str().unwrap(), "--rounds", "2500", "--out", dir.to_str().unwrap()])
            .env("VBQC_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let mut s = summary(&dir);
        s["wall_clock_s"] = serde_json::Value::Null;
        s["overrides"]["out"] = serde_json::Value::Null;
        s["config"]["output_dir"] = serde_json::Value::Null;
        outputs.push((s, fs::read(dir.join("rounds.jsonl")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].0["n"], 2500);
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            vbqc_cli::load_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}

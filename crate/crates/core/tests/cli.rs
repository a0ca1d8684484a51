use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn latcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latcube"))
        .args(args)
        .env_remove("LATCUBE_SEED")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const CUBE: &str =
    r#"{"dim":3,"vertices":[[0,0,0],[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]]}"#;
const REEVE2: &str = r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,2]]}"#;

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cube = write(dir.path(), "cube.json", CUBE);
    let reeve = write(dir.path(), "reeve.json", REEVE2);
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"dim\": 3, \"vertices\": [[0, 0]]}",
    );

    for prop in ["smooth", "cube", "prismatoid", "idp"] {
        let out = latcube(&["check", &cube, "--property", prop]);
        assert_eq!(out.status.code(), Some(0), "{prop}");
        assert_eq!(json(&out)["holds"], true);
    }
    let out = latcube(&["check", &cube, &cube, "--property", "idp-pair"]);
    assert_eq!(out.status.code(), Some(0));

    let out = latcube(&["check", &reeve, "--property", "idp"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(
        doc["report"]["witnesses"][0]["counterexample"],
        serde_json::json!([1, 1, 1])
    );
    assert_eq!(
        latcube(&["check", &reeve, "--property", "smooth"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        latcube(&["check", &reeve, "--property", "cube"])
            .status
            .code(),
        Some(1)
    );

    assert_eq!(
        latcube(&["check", &bad, "--property", "smooth"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        latcube(&["check", missing.to_str().unwrap(), "--property", "smooth"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        latcube(&["check", &cube, "--property", "idp-pair"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        latcube(&["check", &cube, "--property", "shiny"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn generate_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("c2");
    let out = latcube(&[
        "generate",
        "--dim",
        "2",
        "--count",
        "100",
        "--seed",
        "7",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    let entries = manifest.as_array().unwrap();
    assert_eq!(entries.len(), 100);
    assert_eq!(entries[3]["params"]["seed"], 10);
    for e in entries {
        let f = out_dir.join(e["path"].as_str().unwrap());
        let out = latcube(&["check", f.to_str().unwrap(), "--property", "smooth"]);
        assert_eq!(out.status.code(), Some(0), "{f:?}");
    }

    let m = out_dir.join("manifest.json");
    let out = latcube(&["verify", "T3.5", "--corpus", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["theorem_id"], "T3.5");
    assert_eq!(r["instances"], 100);
    assert_eq!(r["passes"], 100);
    assert_eq!(r["tool"], "latcube");

    // Planar corpus: three-dimensional statements skip every instance.
    let out = latcube(&[
        "verify",
        "C3.2",
        "--corpus",
        m.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("latcube C3.2: 0 instances"), "{text}");
    assert_eq!(text.matches("skip ").count(), 100);

    let report = dir.path().join("r.json");
    let out = latcube(&[
        "verify",
        "c4.8",
        "--corpus",
        m.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
        "--jobs",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["failures"], serde_json::json!([]));

    assert_eq!(
        latcube(&["verify", "T9.9", "--corpus", m.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn empty_corpus_and_env_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("empty");
    let out = latcube(&[
        "generate",
        "--count",
        "0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_dir.join("manifest.json")).unwrap();
    assert_eq!(
        serde_json::from_str::<Value>(&text).unwrap(),
        serde_json::json!([])
    );

    let a = dir.path().join("a");
    let status = Command::new(env!("CARGO_BIN_EXE_latcube"))
        .args(["generate", "--count", "1", "--out", a.to_str().unwrap()])
        .env("LATCUBE_SEED", "99")
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest[0]["params"]["seed"], 99);
}

#[test]
fn prismatoid_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("p");
    let out = latcube(&[
        "generate",
        "--dim",
        "3",
        "--kind",
        "prismatoid",
        "--count",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let m = out_dir.join("manifest.json");
    for t in ["L4.2", "L4.3", "L4.5", "T4.6", "L2.4"] {
        let out = latcube(&["verify", t, "--corpus", m.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{t}");
        assert!(json(&out)["instances"].as_u64().unwrap() >= 5, "{t}");
    }
    let bad_dim = latcube(&[
        "generate",
        "--dim",
        "2",
        "--kind",
        "prismatoid",
        "--count",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(bad_dim.status.code(), Some(2));
}

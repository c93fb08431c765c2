use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn liedefine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liedefine"))
        .args(args)
        .env_remove("LIEDEFINE_JOBS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn failed(v: &Value) -> Vec<String> {
    v["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "failed")
        .map(|r| {
            format!(
                "{} {}",
                r["family"].as_str().unwrap(),
                r["relation"].as_str().unwrap()
            )
        })
        .collect()
}

#[test]
fn witt_dirty_record_carries_the_recomputed_boundary() {
    let o = liedefine(&[
        "verify",
        "--algebra",
        "witt",
        "--suites",
        "relations,witt-dirty",
    ]);
    let v = json(&o);
    let rec = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["relation"] == "boundary of e1^e2^e4")
        .unwrap();
    assert_eq!(rec["status"], "verified");
    assert!(rec["note"]
        .as_str()
        .unwrap()
        .contains("recomputed: e3 ^ e4 + 3*(e2 ^ e5) - 2*(e1 ^ e6)"));
    // the degree -5 member of the negative family is the only failure
    assert_eq!(
        failed(&v),
        vec![
            "witt-minus ad(e-1)^3(e-2) + 6*ad(e-2)^2(e-1) = 0",
            "witt-minus@laurent ad(e-1)^3(e-2) + 6*ad(e-2)^2(e-1) = 0"
        ]
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn input_errors_have_distinct_codes() {
    assert_eq!(code(&liedefine(&["verify", "--algebra", "vect:99"])), 4);
    assert_eq!(code(&liedefine(&["verify", "--algebra", "nope:3"])), 3);
    assert_eq!(
        code(&liedefine(&[
            "verify",
            "--algebra",
            "vect:3",
            "--maxdeg",
            "7"
        ])),
        5
    );
    assert_eq!(
        code(&liedefine(&[
            "verify",
            "--algebra",
            "vect:3",
            "--maxlen",
            "6"
        ])),
        5
    );
    assert_eq!(
        code(&liedefine(&[
            "verify",
            "--algebra",
            "witt",
            "--out",
            "/nonexistent/dir/r.json"
        ])),
        6
    );
    assert_eq!(
        code(&liedefine(&[
            "verify",
            "--algebra",
            "witt",
            "--suites",
            "bogus"
        ])),
        7
    );
    assert_eq!(
        code(&liedefine(&[
            "verify",
            "--algebra",
            "witt",
            "--output",
            "yaml"
        ])),
        7
    );
    assert_eq!(code(&liedefine(&["verify", "--frobnicate"])), 7);
}

#[test]
fn override_lifts_the_degree_cutoff() {
    let o = liedefine(&[
        "verify",
        "--algebra",
        "witt",
        "--suites",
        "generation",
        "--maxdeg",
        "8",
        "--override-cutoffs",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["config"]["override-cutoffs"], "true");
}

#[test]
fn strict_flags_sign_repairs() {
    let args = ["verify", "--algebra", "h:4", "--suites", "relations"];
    let o = liedefine(&args);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["records"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["status"] == "verified-after-sign-repair" && !r["witness"].is_null()));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(code(&liedefine(&strict)), 2);
}

#[test]
fn reports_are_byte_identical_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let run = |p: &Path, jobs: &str| {
        liedefine(&[
            "verify",
            "--algebra",
            "k:5",
            "--suites",
            "serre,generation",
            "--jobs",
            jobs,
            "--out",
            p.to_str().unwrap(),
        ])
    };
    assert_eq!(code(&run(&a, "1")), 0);
    assert_eq!(code(&run(&b, "4")), 0);
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 2);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert!(v["engine"].as_str().unwrap().starts_with("liedefine "));
    assert!(v["config"]["contact-bracket"]
        .as_str()
        .unwrap()
        .starts_with("field-homomorphic"));
}

#[test]
fn all_is_the_union_of_the_suites() {
    let all = json(&liedefine(&[
        "verify",
        "--algebra",
        "sl:3",
        "--suites",
        "all",
    ]));
    let mut records = Vec::new();
    for s in [
        "relations",
        "serre",
        "witt-dirty",
        "generation",
        "defining",
        "homology",
        "tables",
    ] {
        let v = json(&liedefine(&["verify", "--algebra", "sl:3", "--suites", s]));
        records.extend(v["records"].as_array().unwrap().iter().cloned());
    }
    assert_eq!(all["records"].as_array().unwrap(), &records);
    assert!(!records.is_empty());
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# serre check\nalgebra = sp:6\nsuites = serre\noutput = text\n",
    )
    .unwrap();
    let o = liedefine(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("liedefine "));
    assert!(text.contains("algebra: sp:6"));
    assert!(text.contains(", 0 failed"));
    // flags win over the file
    let o = liedefine(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(json(&o)["config"]["output"], "json");
    fs::write(&cfg, "algebra = sp:6\nspeed = 11\n").unwrap();
    assert_eq!(
        code(&liedefine(&["verify", "--config", cfg.to_str().unwrap()])),
        7
    );
}

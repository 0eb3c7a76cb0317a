use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arclemma"))
        .args(args)
        .output()
        .expect("run binary")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn bounds_examples() {
    let out = run(&["bounds", "--k", "1", "--m", "500", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["format_version"], 1);
    let sphere = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["bound_name"] == "sphere_crossing_lower_bound")
        .unwrap();
    assert!((sphere["value"].as_f64().unwrap() - 0.0125).abs() < 1e-12);

    let v = json(&run(&["bounds", "--k", "1", "--m", "20", "--n", "10"]));
    let sphere = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["bound_name"] == "sphere_crossing_lower_bound")
        .unwrap();
    assert_eq!(sphere["applicable"], false);

    let out = run(&["bounds", "--chi", "-1", "--k", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines().any(|l| l == "przytycki_max_arcs,4,true,k=1"),
        "{text}"
    );
}

#[test]
fn usage_and_help_exit_codes() {
    assert_eq!(run(&["bounds"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["bounds", "--k", "x"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let help = String::from_utf8(run(&["scaling", "--help"]).stdout).unwrap();
    assert!(help.contains("CSV columns: n,m,crossings,bound,applicable,ratio"));
}

#[test]
fn validate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "ok",
        "arcsys 1\nn 4 k 1\narc 1 4 ab\narc 1 2 -\n",
    );
    assert_eq!(run(&["validate", &ok]).status.code(), Some(0));

    let dup = write(
        dir.path(),
        "dup",
        "arcsys 1\nn 4 k 1\narc 1 3 a\narc 1 3 a\n",
    );
    let out = run(&["validate", &dup]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violations"][0]["kind"], "homotopic");

    let cross = write(
        dir.path(),
        "cross",
        "arcsys 1\nn 4 k 0\narc 1 3 b\narc 2 4 b\n",
    );
    let out = run(&["validate", &cross]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["violations"][0]["kind"], "too-many-intersections");
    assert_eq!(v["violations"][0]["count"], 1);

    let bad = write(dir.path(), "bad", "arcsys 1\nn 4 k 1\narc 1 4 a\n");
    let out = run(&["validate", &bad]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
    assert_eq!(
        run(&["validate", "/nonexistent/file"]).status.code(),
        Some(65)
    );
}

#[test]
fn search_examples() {
    let size = |args: &[&str]| json(&run(args))["size"].as_u64().unwrap();
    assert_eq!(size(&["search", "--n", "3", "--k", "0"]), 4);
    assert_eq!(size(&["search", "--n", "2", "--k", "1"]), 1);
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("w.arcsys");
    let out = run(&[
        "search",
        "--n",
        "6",
        "--k",
        "1",
        "--mode",
        "greedy",
        "--seed",
        "3",
        "--out",
        witness.to_str().unwrap(),
    ]);
    let v = json(&out);
    assert!(v["size"].as_u64().unwrap() <= 60);
    assert_eq!(v["przytycki_bound"], 60.0);
    let text = std::fs::read_to_string(&witness).unwrap();
    assert_eq!(
        run(&["validate", witness.to_str().unwrap()]).status.code(),
        Some(0)
    );
    assert!(text.starts_with("arcsys 1\nn 6 k 1\n"));
    assert_eq!(
        run(&["search", "--n", "6", "--k", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn certify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let sparse = write(
        dir.path(),
        "sparse",
        "arcsys 1\nn 5 k 1\narc 1 2 -\narc 2 3 -\n",
    );
    let out = run(&["certify", &sparse]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["applicable"], false);

    let search = dir.path().join("dense");
    run(&[
        "search",
        "--n",
        "6",
        "--k",
        "2",
        "--mode",
        "greedy",
        "--out",
        search.to_str().unwrap(),
    ]);
    let out = run(&["certify", search.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["levels"].as_array().unwrap().len(), 1);
    assert_eq!(v["levels"][0]["pieces"][0]["status"], "many-crossings");
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 3);

    let out = run(&[
        "certify",
        search.to_str().unwrap(),
        "--threshold",
        "1e9",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.lines().filter(|l| l.contains(",bisected,")).count() >= 1,
        "{text}"
    );
}

#[test]
fn scaling_examples() {
    let out = run(&["scaling", "--k", "1", "--n", "4..4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["rows"].as_array().unwrap().is_empty());

    let v = json(&run(&[
        "scaling", "--k", "2", "--n", "3..=6", "--seed", "1",
    ]));
    let rows = v["rows"].as_array().unwrap();
    for r in rows {
        if r["applicable"] == true {
            assert!(r["ratio"].as_f64().unwrap() >= 1.0);
        }
    }
    for w in rows.windows(2) {
        if w[0]["n"] == w[1]["n"] {
            assert!(w[1]["bound"].as_f64().unwrap() > w[0]["bound"].as_f64().unwrap());
        }
    }
}

#[test]
fn planarize_file_and_generated() {
    let out = run(&["planarize", "--g", "2", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["genus_after"], 0);
    assert_eq!(v["report"]["removed_edges"].as_array().unwrap().len(), 4);

    let d = arclemma::maps::random_drawn_system(1, 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.cmap", &arclemma::format::emit_drawn(&d));
    let v = json(&run(&["planarize", &file]));
    assert_eq!(v["report"]["genus_before"], 1);
    assert_eq!(run(&["planarize"]).status.code(), Some(64));
}

#[test]
fn report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        run(&["report", "--seed", "3", "--out", p]).status.code(),
        Some(0)
    );
    let first = std::fs::read(&path).unwrap();
    run(&["report", "--seed", "3", "--out", p]);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

//! End-to-end tests of the command-line interface: exit codes, report
//! shapes, JSON round-trips, and SVG structure.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shapelift"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn shape_membership_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(dir.path(), "ball.json", r#"{"type":"ball","R":"301/100"}"#);

    let out = bin()
        .args(["shape", "--domain", &ball, "--point", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "member: true");

    let out = bin()
        .args(["shape", "--domain", &ball, "--point", "2,3", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verdict"]["member"], serde_json::Value::Bool(false));
    assert_eq!(report["provenance"]["point"][0], "2");
    assert!(report["version"].is_string());
}

#[test]
fn malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(dir.path(), "ball.json", r#"{"type":"ball","R":"3"}"#);

    // Floats are rejected outright.
    let out = bin()
        .args(["shape", "--domain", &ball, "--point", "1.5,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1.5"));

    // Malformed JSON reports the position.
    let broken = write(dir.path(), "broken.json", r#"{"type":"ball","R":"#);
    let out = bin()
        .args(["shape", "--domain", &broken, "--point", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(
        err.contains("line") || err.contains("column"),
        "unhelpful error: {err}"
    );

    // Domain invariants are enforced at parse time.
    let bad = write(dir.path(), "bad.json", r#"{"type":"ball","R":"-3"}"#);
    let out = bin()
        .args(["shape", "--domain", &bad, "--point", "1,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lift_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let e13 = write(
        dir.path(),
        "e13.json",
        r#"{"type":"ellipsoid","a":"1","b":"3"}"#,
    );
    let vertical = write(
        dir.path(),
        "vertical.json",
        r#"[["9/20","3/2"],["9/20","16/5"]]"#,
    );
    let out = bin()
        .args(["lift", "--domain", &e13, "--path", &vertical, "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verdict"]["verdict"], "obstructed");
    assert_eq!(report["verdict"]["witness"]["form_min"], "33/10");

    // Neither test applies: exit code 2.
    let wander = write(
        dir.path(),
        "wander.json",
        r#"[["2/5","1"],["3/5","17/10"],["3/5","4"]]"#,
    );
    let out = bin()
        .args(["lift", "--domain", &e13, "--path", &wander])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out).trim(), "verdict: undetermined");
}

#[test]
fn report_round_trips() {
    let out = bin()
        .args([
            "embed",
            "--from",
            "1,4",
            "--into",
            "2,2",
            "--horizon",
            "200",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let report: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    let again: serde_json::Value =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report, again);
    assert_eq!(report["verdict"]["outcome"], "no_obstruction_up_to");
    assert_eq!(report["verdict"]["horizon"], 200);

    let out = bin()
        .args([
            "embed",
            "--from",
            "1,5",
            "--into",
            "2,2",
            "--horizon",
            "50",
            "--json",
        ])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verdict"]["outcome"], "obstructed_at");
    assert_eq!(report["verdict"]["index"], 5);
    assert_eq!(report["verdict"]["source_entry"], "5");
    assert_eq!(report["verdict"]["target_entry"], "4");
}

#[test]
fn obstruct_with_witness_file() {
    let dir = tempfile::tempdir().unwrap();
    let corner = write(
        dir.path(),
        "corner.json",
        r#"{"type":"toric_pl","profile":[["0","24"],["2","17"],["19","0"]]}"#,
    );
    let b20 = write(dir.path(), "b20.json", r#"{"type":"ball","R":"20"}"#);
    let witness = write(
        dir.path(),
        "witness.json",
        r#"{"inner":["16","16"],"path":[["7","8"],["5/2","16"],["2","84/5"],["1/2","22"]]}"#,
    );
    let out = bin()
        .args([
            "obstruct",
            "--source",
            &corner,
            "--target",
            &b20,
            "--witness",
            &witness,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("obstructed"));

    // Inclusion makes the claim hopeless: inconclusive, exit 2.
    let b1 = write(dir.path(), "b1.json", r#"{"type":"ball","R":"1"}"#);
    let out = bin()
        .args([
            "obstruct", "--source", &b1, "--target", &b20, "--search", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("inconclusive"));
}

#[test]
fn capacity_and_lattice_reports() {
    let out = bin()
        .args(["capacity", "--a", "1", "--b", "2", "--count", "8"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "0, 1, 2, 2, 3, 3, 4, 4, 4");

    let out = bin()
        .args([
            "capacity", "--a", "6/5", "--b", "12/5", "--index", "3", "--json",
        ])
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["verdict"]["value"], "12/5");

    for mode in ["row-sum", "brute"] {
        let out = bin()
            .args([
                "lattice", "--a", "2", "--b", "9", "--t", "6", "--mode", mode,
            ])
            .output()
            .unwrap();
        assert_eq!(stdout(&out).trim(), "count: 4", "mode {mode}");
    }
}

#[test]
fn sft_wrappers() {
    let out = bin()
        .args([
            "sft",
            "index",
            "--pos",
            "7",
            "--c1",
            "0",
            "--neg-terms",
            "6",
        ])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "index: 1");

    let out = bin()
        .args(["sft", "bidegree", "--neg", "0:-1", "--d1", "0", "--d2", "1"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "index: 1");

    let out = bin()
        .args([
            "sft",
            "building",
            "--indices",
            "1,1",
            "--dims",
            "1",
            "--areas",
            "1/2,1/2",
        ])
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "area: 1, index: 1");
}

#[test]
fn svg_emission_structure() {
    let dir = tempfile::tempdir().unwrap();
    let ball = write(dir.path(), "ball.json", r#"{"type":"ball","R":"3"}"#);
    let out_path = dir.path().join("plot.svg");

    // Regions only: one polygon per shaded region, no path markers.
    let out = bin()
        .args([
            "plot",
            "--domain",
            &ball,
            "--svg",
            out_path.to_str().unwrap(),
            "--shade",
            "knotted",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(&out_path).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert_eq!(svg.matches("marker-end").count(), 0);

    // With a path, an oriented polyline appears; output is deterministic.
    let path = write(dir.path(), "p.json", r#"[["1/2","1"],["1/2","7/2"]]"#);
    let run = || {
        bin()
            .args([
                "plot",
                "--domain",
                &ball,
                "--svg",
                out_path.to_str().unwrap(),
                "--path",
                &path,
                "--shade",
                "knotted,flexible",
            ])
            .output()
            .unwrap();
        fs::read_to_string(&out_path).unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);
    assert_eq!(first.matches("<polygon").count(), 2);
    assert_eq!(first.matches("marker-end").count(), 1);
}

#[test]
fn obstruct_svg_scene() {
    let dir = tempfile::tempdir().unwrap();
    let corner = write(
        dir.path(),
        "corner.json",
        r#"{"type":"toric_pl","profile":[["0","24"],["2","17"],["19","0"]]}"#,
    );
    let b20 = write(dir.path(), "b20.json", r#"{"type":"ball","R":"20"}"#);
    let witness = write(
        dir.path(),
        "witness.json",
        r#"{"inner":["16","16"],"path":[["7","8"],["5/2","16"],["2","84/5"],["1/2","22"]]}"#,
    );
    let out_path = dir.path().join("scene.svg");
    let out = bin()
        .args([
            "obstruct",
            "--source",
            &corner,
            "--target",
            &b20,
            "--witness",
            &witness,
            "--svg",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(&out_path).unwrap();
    // Target triangle, excluded region, and inner ellipsoid triangle, plus
    // the oriented witness path and a legend naming each.
    assert_eq!(svg.matches("<polygon").count(), 3);
    assert_eq!(svg.matches("marker-end").count(), 1);
    for label in ["target image", "excluded region", "inner ellipsoid", "witness path"] {
        assert!(svg.contains(label), "missing legend entry {label}");
    }
}

#[test]
fn verify_runs_clean_and_deterministically() {
    let run = || {
        let out = bin()
            .env("SHAPELIFT_THREADS", "3")
            .args(["verify", "--json"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    let first = run();
    assert!(first.contains("\"pass\":true"));
    assert!(!first.contains("\"pass\":false"));
    let second = run();
    assert_eq!(first, second);
}

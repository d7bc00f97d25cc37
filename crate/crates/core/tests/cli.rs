use std::path::Path;
use std::process::{Command, Output};

use toric_ham::report::ReportFile;
use toric_ham::{parse_rational, rat};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-ham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/examples/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn blowup_loop_one() {
    let out = bin(&["compute", &data("blowup_cp3.json"), "--loop-index", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    assert!(
        stdout
            .contains("loop e1: kappa = 15/28, I = -1/2 -> infinite cyclic subgroup in pi_1(Ham)"),
        "{stdout}"
    );
}

#[test]
fn cp2_is_inconclusive() {
    let out = bin(&["compute", &data("cp2.json"), "--loop-index", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("I = 0 -> inconclusive"));
}

#[test]
fn file_loops_are_the_default() {
    let out = bin(&["compute", &data("cp2.json")]);
    let stdout = text(&out.stdout);
    assert!(stdout.contains("loop e1:"));
    assert!(stdout.contains("loop (0,1,-1):"));
    assert!(!stdout.contains("loop e3:"));
    let all = text(&bin(&["compute", &data("cp2.json"), "--all"]).stdout);
    assert!(all.contains("loop e3:"));
}

#[test]
fn half_space_violation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "bad.json",
        r#"{"name": "bad", "weights": [[1], [-1]], "tau": ["1"]}"#,
    );
    let out = bin(&["compute", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("half space"));
}

#[test]
fn empty_and_degenerate_levels_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_spec(
        dir.path(),
        "e.json",
        r#"{"name": "e", "weights": [[1], [1]], "tau": ["-1"]}"#,
    );
    let out = bin(&["compute", &empty]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("empty"));
    // μ = 0 on the blow-up is not a regular value
    let flat = write_spec(
        dir.path(),
        "f.json",
        r#"{"name": "f", "weights": [[1,0],[1,0],[1,1],[0,1],[1,0]], "tau": ["2", "0"]}"#,
    );
    assert_eq!(bin(&["compute", &flat]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    for (body, needle) in [
        ("not json", "malformed JSON"),
        (
            r#"{"name": "x", "weights": [[1], [1]], "tau": ["1/0"]}"#,
            "tau[0]",
        ),
        (
            r#"{"name": "x", "weights": [[1], [1, 2]], "tau": ["1"]}"#,
            "weights[1]",
        ),
        (
            r#"{"name": "x", "weights": [[1], [1]], "tau": ["1"], "loops": [[1]]}"#,
            "loops[0]",
        ),
        (r#"{"name": "x", "weights": [[1], [1]], "tau": []}"#, "tau"),
    ] {
        let spec = write_spec(dir.path(), "m.json", body);
        let out = bin(&["compute", &spec]);
        assert_eq!(out.status.code(), Some(1), "{body}");
        assert!(
            text(&out.stderr).contains(needle),
            "{body}: {}",
            text(&out.stderr)
        );
    }
    assert_eq!(
        bin(&["compute", "/nonexistent/spec.json"]).status.code(),
        Some(1)
    );
    let out = bin(&["compute", &data("cp2.json"), "--loop-index", "9"]);
    assert_eq!(out.status.code(), Some(1));
    let out = bin(&["compute", &data("cp2.json"), "--loop-weights", "1,x,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let res = bin(&[
            "compute",
            &data("blowup_cp3.json"),
            "--all",
            "--json",
            out.to_str().unwrap(),
        ]);
        assert_eq!(res.status.code(), Some(0));
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let report = ReportFile::from_json(&text(&ja)).unwrap();
    assert_eq!(report.to_json().as_bytes(), &ja[..]);
    let first = &report.loops[0];
    assert_eq!(first.invariant.0, rat(-1, 2));
    assert_eq!(first.kappa.to_string(), "15/28");
    let facets: Vec<String> = first
        .facet_contributions
        .iter()
        .map(|f| f.value.to_string())
        .collect();
    assert_eq!(facets, ["135/28", "-61/28", "-11/7", "17/28", "-61/28"]);
    assert_eq!(report.polytope.vertices.len(), 6);
    assert_eq!(report.polytope.volume.0, parse_rational("7/6").unwrap());
}

#[test]
fn loop_weights_flag() {
    let out = bin(&[
        "compute",
        &data("blowup_cp3.json"),
        "--loop-weights",
        "1,1,1,0,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("loop (1,1,1,0,1): kappa = 2, I = 0 -> inconclusive"));
}

#[test]
fn oracle_subcommands() {
    let out = bin(&["oracle", "blowup-cp3", "--tau", "2", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = text(&out.stdout);
    for needle in ["I = -1/2", "I = 3/2", "I = -3/2", "kappa = 15/28", "135/28"] {
        assert!(stdout.contains(needle), "{needle} missing from {stdout}");
    }
    let out = bin(&["oracle", "blowup-cp3", "--tau", "1", "--mu", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("μ < τ required"));

    let out = bin(&["oracle", "cpn", "--n", "2", "--tau", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("I = 0"));
    assert_eq!(
        bin(&["oracle", "cpn", "--n", "0", "--tau", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["oracle", "cpn", "--n", "2", "--tau", "one"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn selftest_passes() {
    let out = bin(&["selftest"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}{}",
        text(&out.stdout),
        text(&out.stderr)
    );
    assert!(!text(&out.stdout).contains("FAIL"));
}

//! End-to-end runs of the `valdist` binary.

use std::fs;
use std::process::{Command, Output};

fn valdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valdist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn examples_lists_the_catalogue() {
    let o = valdist(&["examples"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().count() >= 8);
    assert!(text.lines().any(|l| l.starts_with("frei-ex12 ")));
    let show = valdist(&["examples", "--show", "qdiff-poly"]);
    assert!(stdout(&show).contains("operator = \"qdifference\""));
    assert_eq!(valdist(&["examples", "--show", "nope"]).status.code(), Some(2));
}

#[test]
fn run_then_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("q");
    let o = valdist(&["run", "qdiff-poly", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall: PASS"));
    for f in ["scenario.toml", "report.txt", "residual.csv", "reduce.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let v = valdist(&["verify", out.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stderr(&v));

    let report = out.join("report.txt");
    let text = fs::read_to_string(&report).unwrap();
    fs::write(&report, text.replacen("PASS", "FAIL", 1)).unwrap();
    let v = valdist(&["verify", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(2));
    assert!(stderr(&v).contains("line"));
}

#[test]
fn scenario_files_and_validation_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.toml");
    fs::write(
        &good,
        "name = \"exp-check\"\ncoefficients = [\"-1\"]\nsolutions = [\"exp(z)\", \"z\"]\nanalyses = [\"residual\"]\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = valdist(&["run", good.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    // z is not a solution of f' = f: a hard failure, exit 1
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall: FAIL"));

    let empty = tmp.path().join("empty.toml");
    fs::write(&empty, "name = \"x\"\ncoefficients = [\"1\"]\nanalyses = []\n").unwrap();
    let o = valdist(&["run", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no analyses requested"));

    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "name = \"x\"\ncoefficients = [\"exp(z\"]\nsolutions = [\"z\"]\nanalyses = [\"residual\"]\n").unwrap();
    let o = valdist(&["run", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coefficients[0]"), "{}", stderr(&o));
}

#[test]
fn reduce_prints_monomials() {
    let o = valdist(&["reduce", "--n", "2", "--p", "1"]);
    assert!(o.status.success());
    // every monomial of C_2 for p = 1 has index sum 2 - 1
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert!(!lines.is_empty());
    for l in &lines {
        let parts: Vec<&str> = l.split("; ").collect();
        assert_eq!(parts.len(), 3, "{l}");
        assert_eq!(parts[0], "2");
        let sum: usize = parts[1].split(',').map(|x| x.parse::<usize>().unwrap()).sum();
        assert_eq!(sum, 1);
        assert!(parts[2].parse::<u64>().unwrap() >= 1);
    }
    assert_eq!(valdist(&["reduce", "--n", "2", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn analyze_prints_growth_and_deficiency() {
    let o = valdist(&["analyze", "-f", "exp(z)", "--grid", "lin:10:40:7", "--target", "0", "--target", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let mut rows = csv.lines();
    let header = rows.next().unwrap();
    let cols: Vec<&str> = header.split(',').collect();
    let ti = cols.iter().position(|c| *c == "T").unwrap();
    for row in rows {
        let v: Vec<&str> = row.split(',').collect();
        let r: f64 = v[0].parse().unwrap();
        let t: f64 = v[ti].parse().unwrap();
        assert!((t / (r / std::f64::consts::PI) - 1.0).abs() < 1e-6, "{row}");
    }
    let err = stderr(&o);
    assert!(err.contains("deficiency of 0: 1.0"), "{err}");
    assert!(err.contains("deficiency of 1:"), "{err}");
}

#[test]
fn dominance_and_solve() {
    let o = valdist(&["dominance", "-c", "exp(2*z)", "-c", "-(2*exp(z) + 1)", "--grid", "lin:5:30:16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("p,r,ratio,trimmed,selected\n"));
    assert!(stderr(&o).contains("selected p = 0"));

    let tmp = tempfile::tempdir().unwrap();
    let rays = tmp.path().join("rays.csv");
    let o = valdist(&["solve", "-c", "-1", "--ic", "1", "--grid", "lin:1:4:4", "--dump-rays", rays.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(&rays).unwrap().lines().count() > 4);
}

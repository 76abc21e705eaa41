use std::path::Path;
use std::process::{Command, Output};

fn fordpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fordpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn farey_list_and_count() {
    let o = fordpoly(&["farey", "list", "--q", "5", "--interval", "0/1:1/2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "p,q\n0,1\n1,5\n1,4\n1,3\n2,5\n1,2\n");
    let o = fordpoly(&["farey", "list", "--q", "3", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), r#"["0/1","1/3","1/2","2/3","1/1"]"#);
    let o = fordpoly(&["farey", "count", "--q", "100"]);
    assert_eq!(stdout(&o).trim(), "3045");
    // δ = 1/50 gives Q = 5
    let o = fordpoly(&["farey", "count", "--delta", "0.02"]);
    assert_eq!(stdout(&o).trim(), "11");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&fordpoly(&["farey", "count"])), 2);
    assert_eq!(code(&fordpoly(&["farey", "count", "--q", "5", "--delta", "0.02"])), 2);
    assert_eq!(code(&fordpoly(&["farey", "count", "--q", "0"])), 2);
    assert_eq!(code(&fordpoly(&["farey", "count", "--q", "5", "--interval", "1/2:1/3"])), 2);
    assert_eq!(code(&fordpoly(&["stats", "eval", "--stat", "nope", "--q", "5"])), 2);
    assert_eq!(code(&fordpoly(&["farey", "count", "--q", "4294967296"])), 2);
    assert_eq!(code(&fordpoly(&["--help"])), 0);
}

#[test]
fn stats_eval() {
    let o = fordpoly(&["stats", "eval", "--stat", "hyp", "--q", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q_j,q_next,x,y,hyp\n1,2,0.5,1,1.25\n2,1,1,0.5,1.25\n");
}

#[test]
fn moments_run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("m.json");
    let o = fordpoly(&["moments", "run", "--stat", "hyp", "--q", "300", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["report"], "moments");
    assert!(v["data"][0]["predicted"].is_number());

    let csv = dir.path().join("fit.csv");
    let o = fordpoly(&[
        "moments", "run", "--stat", "euclid", "--q", "400", "--q-list", "100,200", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 4);

    let o = fordpoly(&["moments", "run", "--angle-pair", "--q", "200", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&json).unwrap().contains("\"angle-pair\""));

    let o = fordpoly(&["moments", "run", "--stat", "slope", "--q", "50", "--q-list", "10,20", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dist_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let o = fordpoly(&[
        "dist", "run", "--stat", "hyp", "--q", "200", "--t-grid", "log:1:10:4", "--compare",
        "closed-form,quadrature", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 4);
    assert!(text.contains("empirical@200") && text.contains("closed-form") && text.contains("quadrature"));

    let bad = fordpoly(&["dist", "run", "--stat", "area", "--q", "20", "--t-grid", "lin:1:2:3", "--compare", "closed-form", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
    let bad = fordpoly(&["dist", "run", "--stat", "hyp", "--q", "20", "--t-grid", "cubic:1:2:3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn bcz_orbit() {
    let o = fordpoly(&["bcz", "orbit", "--x", "1/5", "--y", "1/1", "--order", "5", "--steps", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "step,x,y,q_j,q_next\n0,0.2,1,1,5\n1,1,0.8,5,4\n2,0.8,0.6,4,3\n3,0.6,1,3,5\n");
    let o = fordpoly(&["bcz", "orbit", "--x", "1/1", "--y", "1/1", "--steps", "2"]);
    assert_eq!(stdout(&o), "step,x,y,q_j,q_next\n0,1,1,,\n1,1,1,,\n2,1,1,,\n");
    assert_eq!(code(&fordpoly(&["bcz", "orbit", "--x", "1/5", "--y", "1/2", "--steps", "2"])), 2);
}

#[test]
fn sums() {
    let o = fordpoly(&["sums", "totient", "--q", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["data"][0]["computed"].as_f64().unwrap() - 1.757222222222222).abs() < 1e-12);
    let o = fordpoly(&["sums", "inverse-count", "--modulus", "5", "--t", "5", "--interval", "0/1:1/1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["data"][0]["computed"], 4.0);
    assert_eq!(code(&fordpoly(&["sums", "inverse-count", "--modulus", "0", "--t", "1"])), 2);
}

#[test]
fn render() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let o = fordpoly(&["render", "--q", "5", "--interval", "0/1:1/1", "--edges", "hyperbolic", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let svg = std::fs::read_to_string(&a).unwrap();
    assert_eq!(svg, std::fs::read_to_string(&b).unwrap());
    assert_eq!(svg.matches("<circle").count(), 13);
    let o = fordpoly(&["render", "--q", "5", "--no-circles", "--out", a.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&a).unwrap().matches("<circle").count(), 0);
    assert_eq!(code(&fordpoly(&["render", "--q", "5", "--width", "0", "--out", a.to_str().unwrap()])), 2);
}

#[test]
fn io_errors_exit_4() {
    let o = fordpoly(&["moments", "run", "--stat", "hyp", "--q", "10", "--out", "/nonexistent-dir/m.json"]);
    assert_eq!(code(&o), 4);
    let o = fordpoly(&["farey", "count", "--config", "/nonexistent-dir/c.txt", "--q", "5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn numeric_failures_exit_3() {
    // the quadrature comparison cannot finish inside the default budget at
    // a threshold this close to where the curve and grid cells align
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = fordpoly(&[
        "dist", "run", "--stat", "euc-angle", "--q", "20", "--t-grid", "lin:1e15:2e15:2", "--compare", "quadrature",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_supplies_missing_options() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# shared settings\nq = 5\ninterval = 0/1:1/2\nno-circles = true\nthreads = 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(stdout(&fordpoly(&["farey", "count", "--config", c])).trim(), "6");
    // command-line options win
    assert_eq!(stdout(&fordpoly(&["farey", "count", "--config", c, "--q", "3"])).trim(), "3");
    let svg = dir.path().join("x.svg");
    let o = fordpoly(&["render", "--config", c, "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<circle").count(), 0);

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(code(&fordpoly(&["farey", "count", "--q", "5", "--config", c])), 2);
    assert!(Path::new(c).exists());
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_surfconv"));
    c.env_remove("SURFCONV_SEED");
    c
}

fn battery(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../battery/configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn check_star_on_three_surface_passes() {
    let t = tempfile::tempdir().unwrap();
    let cfg = battery("example_iv_check_star.json");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", t.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(t.path().join("example_iv_check_star.report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["matrix_id"], "example_iv");
}

#[test]
fn negative_control_expectation() {
    let t = tempfile::tempdir().unwrap();
    let m = r#""matrix": {"k": 3, "l": 2, "entries": [[1,1],[0,1],[2,1],[0,1],[0,1],[1,1]]}"#;
    let fails = write_config(t.path(), "a.json", &format!(r#"{{"id": "a", "suite": "check-star", {m}, "seed": 1, "params": {{"expect": "fails"}}}}"#));
    let holds = write_config(t.path(), "b.json", &format!(r#"{{"id": "b", "suite": "check-star", {m}, "seed": 1, "params": {{"expect": "holds"}}}}"#));
    let out = t.path().join("runs");
    assert_eq!(code(&run(&["run", "--config", fails.to_str().unwrap(), "--out", out.to_str().unwrap()])), 0);
    let o = run(&["run", "--config", holds.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));

    let o = run(&["report", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("runs=2 overall=FAIL"), "{summary}");
    assert!(summary.contains("failing: b"), "{summary}");
    let first = std::fs::read(out.join("verdicts.csv")).unwrap();
    assert_eq!(code(&run(&["report", out.to_str().unwrap()])), 1);
    assert_eq!(std::fs::read(out.join("verdicts.csv")).unwrap(), first);

    std::fs::remove_file(out.join("b.report.json")).unwrap();
    assert_eq!(code(&run(&["report", out.to_str().unwrap()])), 0);
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("runs=1 overall=PASS"), "{summary}");
}

#[test]
fn typeset_for_three_five() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(
        t.path(),
        "ts.json",
        r#"{"id": "ts", "suite": "typeset", "matrix": {"k": 1, "l": 1, "entries": [[1,1]]}, "seed": 3, "params": {"k": 3, "d": 5}}"#,
    );
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", t.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(t.path().join("ts.report.json")).unwrap()).unwrap();
    assert_eq!(v["payload"]["q0"], serde_json::json!([7, 2]));
    assert_eq!(v["payload"]["p0"], serde_json::json!([7, 5]));
    let csv = std::fs::read_to_string(t.path().join("ts.vertices.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "2,5/7,2/7"), "{csv}");
    assert!(csv.lines().any(|l| l == "1,1,1"), "{csv}");
}

#[test]
fn seed_is_required() {
    let t = tempfile::tempdir().unwrap();
    let cfg = write_config(t.path(), "c.json", r#"{"suite": "check-star", "matrix": {"k": 1, "l": 1, "entries": [[1,1]]}}"#);
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", t.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = bin()
        .env("SURFCONV_SEED", "5")
        .args(["run", "--config", cfg.to_str().unwrap(), "--out", t.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["gen-matrix", "--k", "3", "--l", "2"])), 2);
}

#[test]
fn bad_configs_exit_two() {
    let t = tempfile::tempdir().unwrap();
    let unknown = write_config(t.path(), "u.json", r#"{"suite": "check-star", "matrix": {"k": 1, "l": 1, "entries": [[1,1]]}, "seed": 1, "colour": 3}"#);
    let o = run(&["run", "--config", unknown.to_str().unwrap(), "--out", t.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    let broken = write_config(t.path(), "b.json", "{ not json");
    assert_eq!(code(&run(&["run", "--config", broken.to_str().unwrap()])), 2);
    let params = write_config(
        t.path(),
        "p.json",
        r#"{"suite": "lemma-mc", "matrix": {"k": 1, "l": 1, "entries": [[1,1]]}, "seed": 1, "params": {"n_wieghts": 3}}"#,
    );
    assert_eq!(code(&run(&["run", "--config", params.to_str().unwrap(), "--out", t.path().to_str().unwrap()])), 2);
    let empty = t.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert_eq!(code(&run(&["report", empty.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["report", t.path().join("missing").to_str().unwrap()])), 2);
}

#[test]
fn gen_matrix_is_deterministic() {
    let a = run(&["--seed", "7", "gen-matrix", "--k", "4", "--l", "3"]);
    let b = bin().env("SURFCONV_SEED", "7").args(["gen-matrix", "--k", "4", "--l", "3"]).output().unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let m: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(m["k"], 4);
    assert_eq!(m["l"], 3);
    let stored: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../battery/matrices/random_k4_l3.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m, stored);
    let c = run(&["--seed", "8", "gen-matrix", "--k", "4", "--l", "3"]);
    assert_ne!(a.stdout, c.stdout);

    let t = tempfile::tempdir().unwrap();
    let path = t.path().join("m.json");
    assert_eq!(code(&run(&["--seed", "7", "--out", path.to_str().unwrap(), "gen-matrix", "--k", "4", "--l", "3"])), 0);
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    assert_eq!(code(&run(&["--seed", "7", "gen-matrix", "--k", "3", "--l", "2", "--threshold", "1000"])), 1);
    assert_eq!(code(&run(&["--seed", "7", "gen-matrix", "--k", "2", "--l", "3"])), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let t = tempfile::tempdir().unwrap();
    let cfg = battery("paraboloid_k2_ineq6.json");
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    assert_eq!(code(&run(&["run", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["--threads", "1", "run", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap()])), 0);
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 3);
    for n in names {
        if n.to_string_lossy().ends_with(".timing.json") {
            continue;
        }
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

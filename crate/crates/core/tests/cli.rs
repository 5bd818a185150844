use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn metakernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metakernel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn clean_run_exits_zero() {
    let o = metakernel(&["run", scenario("nth_symbolp.events").to_str().unwrap(), "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(SIMPLIFY (NTH (FOO X) Y) (CAR Y) :OBLIGATIONS 1)"));
    assert!(out.contains("; seed 2017 samples 200"));
    assert!(out.contains(":VIOLATIONS 0"));
}

#[test]
fn violations_exit_one() {
    let o = metakernel(&["run", scenario("corrupted.events").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("VIOLATED"));
}

#[test]
fn unproved_bounds_exit_three() {
    let o = metakernel(&["run", scenario("bounds_linear.events").to_str().unwrap(), "--samples", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("UNPROVED :RESIDUAL"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(metakernel(&["run"]).status.code(), Some(2));
    assert_eq!(metakernel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(metakernel(&["run", "/nonexistent/file.events"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("metakernel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.events");
    std::fs::write(&bad, "(defun f (x)\n  (car x)").unwrap();
    let o = metakernel(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:1"));
    std::fs::write(&bad, "(defun f (x) x) (defun f (y) y)").unwrap();
    let o = metakernel(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DEFUN"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn same_seed_gives_identical_reports() {
    let dir = std::env::temp_dir().join(format!("metakernel-replay-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = scenario("context.events");
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.join(format!("report{i}.txt"));
        let o = metakernel(&["run", file.to_str().unwrap(), "--seed", "99", "--report", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn trace_prints_rewrite_steps() {
    let o = metakernel(&["run", scenario("context.events").to_str().unwrap(), "--trace", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(LOGAND-LOGAPP "));
}

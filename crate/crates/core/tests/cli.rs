use std::path::Path;
use std::process::{Command, Output};

fn magnowork(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnowork"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn sweep_writes_identical_csv_for_any_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "[sweep]\nkind = \"temperature\"\nmin = 0.01\nmax = 0.2\nsteps = 8\n",
    )
    .unwrap();
    let one = magnowork(&["sweep", "--config", "run.toml", "--out", "a.csv", "--threads", "1"], dir.path());
    assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
    let four = magnowork(&["sweep", "--config", "run.toml", "--out", "b.csv", "--threads", "4"], dir.path());
    assert!(four.status.success());
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 9);
    assert!(text.starts_with("sweep_value,e_n,"));
}

#[test]
fn unknown_keys_fail_with_their_names() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[params]\ntemprature_k = 0.1\n").unwrap();
    let out = magnowork(&["steady", "--config", "bad.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.temprature_k"));
}

#[test]
fn steady_prints_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = magnowork(&["steady"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().ends_with(",true"));
}

#[test]
fn optimize_detuning_warns_when_hot() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hot.toml"), "[params]\ntemperature_k = 1.0\n").unwrap();
    let out = magnowork(&["optimize-detuning", "--config", "hot.toml", "--grid-steps", "7"], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(",true"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn unknown_figure_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!magnowork(&["repro-fig", "fig7"], dir.path()).status.success());
    let out = magnowork(&["repro-fig", "efficiency", "--out", "eff.csv"], dir.path());
    assert!(out.status.success());
    assert!(dir.path().join("eff.csv").exists());
}

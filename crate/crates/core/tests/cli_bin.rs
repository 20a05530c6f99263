use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn session(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("sessions").join(name)
}

fn annwb(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_annwb"));
    cmd.args(args).env_remove(annwb::cli::CACHE_ENV);
    if let Some(c) = cache {
        cmd.env(annwb::cli::CACHE_ENV, c);
    }
    cmd.output().unwrap()
}

fn run(file: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec!["run", file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = annwb(&args, None);
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn exit_codes_follow_verdicts() {
    let (code, out) = run(&session("faltings.annwb"), &[]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("SEARCH M Yx Z 2 = found b=<x>"));
    let (code, out) = run(&session("faltings_fail.annwb"), &[]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("CHECK1 M 2 = fails pair="));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.annwb");
    std::fs::write(&bad, "annwb v1\nring R = QQ[x]\ncmd gb a\nideal a = <x>\n").unwrap();
    let (code, out) = run(&bad, &[]);
    assert_eq!(code, 2);
    assert!(out.starts_with("ERROR = semantic error at line 3"), "{out}");
    let (code, _) = run(&dir.path().join("missing.annwb"), &[]);
    assert_eq!(code, 2);
}

#[test]
fn window_flags_reach_the_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("lc.annwb");
    std::fs::write(&f, "annwb v1\nring R = QQ[x,y] graded\nmodule F = R^1\nsubset Z = V<x, y>\ncmd lc Z F 2\n")
        .unwrap();
    let (code, out) = run(&f, &["--window", "-3..-2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out, "LC i=2 d=-3 dim=2 stable=yes\nLC i=2 d=-2 dim=1 stable=yes\n");
    let (code, out) = run(&f, &["--window", "-4..-1", "--tmax", "1"]);
    assert_eq!(code, 3, "{out}");
    assert!(out.contains("INCONCLUSIVE"));
}

#[test]
fn cache_directory_from_flag_and_environment() {
    let a = tempfile::tempdir().unwrap();
    let (code, _) = run(&session("ideals.annwb"), &["--cache-dir", a.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_dir(a.path()).unwrap().next().is_some());
    let b = tempfile::tempdir().unwrap();
    let o = annwb(&["run", session("ideals.annwb").to_str().unwrap()], Some(b.path()));
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_dir(b.path()).unwrap().next().is_some());
    // a warm cache gives the same report
    let o2 = annwb(&["run", session("ideals.annwb").to_str().unwrap()], Some(b.path()));
    assert_eq!(o.stdout, o2.stdout);
}

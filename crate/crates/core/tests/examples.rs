//! Runs every example binary built alongside the tests.

use std::path::PathBuf;
use std::process::Command;

fn example(name: &str) -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().unwrap().parent().unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

fn run(name: &str, args: &[&str]) -> String {
    let path = example(name);
    assert!(path.exists(), "{} not built", path.display());
    let out = Command::new(&path).args(args).output().unwrap();
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn chsh_values() {
    let out = run("chsh_values", &[]);
    assert!(out.contains("loc 0.7500000000"));
    assert!(out.contains("ns  1.0000000000"));
}

#[test]
fn parallel_repetition() {
    assert!(run("parallel_repetition", &[]).contains("w_loc(CHSH x CHSH) = 0.625"));
}

#[test]
fn memory_game() {
    let out = run("memory_game", &["1"]);
    assert!(out.contains("1.000000"));
}

#[test]
fn naimark_dilation() {
    assert!(run("naimark_dilation", &[]).contains("trine: K = 6"));
}

#[test]
fn correlation_classes() {
    assert!(run("correlation_classes", &[]).contains("PR box:        ns true  local false"));
}

#[test]
fn linear_algebra() {
    assert!(run("linear_algebra", &[]).contains("first column kept: true"));
}

#[test]
fn seesaw() {
    assert!(run("seesaw", &[]).contains("CHSH history"));
}

#[test]
fn file_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run("file_formats", &[dir.path().to_str().unwrap()]);
    assert!(out.contains("all files parse back"));
    for name in [
        "chsh.game",
        "pr_box.corr",
        "trine.povm",
        "basis.povm",
        "z_i.povm",
        "i_x.povm",
    ] {
        let shipped =
            std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)).unwrap();
        assert_eq!(
            std::fs::read_to_string(dir.path().join(name)).unwrap(),
            shipped,
            "{name}"
        );
    }
}

use std::path::PathBuf;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["nlgames"];
    full.extend_from_slice(args);
    let code = nlgames::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn value_machine_lines() {
    let game = data("chsh.game");
    assert_eq!(
        run(&["--format", "machine", "value", &game, "--type", "loc"]),
        (0, "value loc 0.75\n".into(), String::new())
    );
    let (code, out, _) = run(&["--format", "machine", "value", &game, "--type", "ns"]);
    assert_eq!(code, 0);
    let v: f64 = out.trim().strip_prefix("value ns ").unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn qs_output_is_reproducible() {
    let game = data("chsh.game");
    let args = [
        "--format",
        "machine",
        "value",
        &game,
        "--type",
        "qs",
        "--seeds",
        "4",
        "--rng-seed",
        "3",
    ];
    let first = run(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, run(&args));
    let one_thread = [
        "--threads",
        "1",
        "--format",
        "machine",
        "value",
        &game,
        "--type",
        "qs",
        "--seeds",
        "4",
        "--rng-seed",
        "3",
    ];
    assert_eq!(first, run(&one_thread));
}

#[test]
fn table_report_names_the_certificate() {
    let (code, out, _) = run(&["value", &data("chsh.game"), "--type", "loc"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.750000"));
    assert!(out.contains("exact"));
    assert!(out.contains("deterministic strategy"));
}

#[test]
fn sequences() {
    let game = data("chsh.game");
    let (code, out, _) = run(&[
        "--format", "machine", "sequence", &game, "--mode", "iid", "--type", "loc", "--n-max", "2",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows[0][..4], ["entry", "loc", "1", "0.75"]);
    let n2: f64 = rows[1][4].parse().unwrap();
    assert!((n2 - 0.625f64.sqrt()).abs() < 1e-15);

    let (code, out, _) = run(&[
        "--format", "machine", "sequence", &game, "--mode", "memory", "--type", "loc", "--n-max", "2",
    ]);
    assert_eq!(code, 0);
    let n2: f64 = out
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .nth(4)
        .unwrap()
        .parse()
        .unwrap();
    assert!(n2 >= 0.866);

    let (code, out, _) = run(&["sequence", &game, "--type", "loc", "--n-max", "0"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines()
            .filter(|l| !l.starts_with('#') && !l.trim_start().starts_with('n'))
            .count(),
        0
    );
}

#[test]
fn truncation_is_flagged() {
    let (code, out, _) = run(&[
        "--format",
        "machine",
        "sequence",
        &data("chsh.game"),
        "--type",
        "loc",
        "--n-max",
        "9",
    ]);
    assert_eq!(code, 0);
    assert!(out.ends_with("truncated true\n"));
}

#[test]
fn dilations() {
    let (code, out, _) = run(&["--format", "machine", "dilate", &data("basis.povm")]);
    assert_eq!(code, 0);
    for line in out.lines().filter(|l| l.starts_with("residual")) {
        let r: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!(r <= 1e-12, "{line}");
    }
    let (code, out, _) = run(&["dilate", &data("trine.povm")]);
    assert_eq!(code, 0);
    assert!(out.contains("dilated dimension 6"));

    let (code, out, _) = run(&[
        "--format",
        "machine",
        "dilate",
        &data("z_i.povm"),
        "--joint",
        &data("i_x.povm"),
    ]);
    assert_eq!(code, 0);
    for line in out.lines().filter(|l| l.starts_with("residual")) {
        let r: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        assert!(r <= 1e-9, "{line}");
    }
}

#[test]
fn non_commuting_joint_inputs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let x = nlgames::linalg::pauli_x();
    let id = nlgames::linalg::HermitianOperator::identity(2);
    let px = nlgames::channels::Povm::new(vec![id.add(&x).scale(0.5), id.sub(&x).scale(0.5)]).unwrap();
    let path = dir.path().join("x.povm");
    std::fs::write(&path, nlgames::channels::dump_povm(&px)).unwrap();
    let (code, _, err) = run(&[
        "dilate",
        &data("basis.povm").replace("basis", "trine"),
        "--joint",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 4);
    assert!(err.contains("do not commute"), "{err}");
}

#[test]
fn checks() {
    let pr = data("pr_box.corr");
    assert_eq!(
        run(&["--format", "machine", "check", &pr, "--test", "ns"]).1,
        "check ns pass 0.0\n"
    );
    assert!(run(&["--format", "machine", "check", &pr, "--test", "local"])
        .1
        .starts_with("check local fail"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prod.corr");
    let prod = nlgames::correlations::from_local(
        &[1.0],
        &[vec![vec![0.5, 0.5], vec![1.0, 0.0]]],
        &[vec![vec![0.25, 0.75], vec![0.0, 1.0]]],
    )
    .unwrap();
    std::fs::write(&path, nlgames::correlations::dump_correlation(&prod)).unwrap();
    let (code, out, _) = run(&[
        "--format",
        "machine",
        "check",
        path.to_str().unwrap(),
        "--test",
        "local",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("check local pass"));
    let total: f64 = out
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.game");
    std::fs::write(&bad, "game 2 2 2 2\ndist 0.25 0.25 0.25 0.25\nwin 0 0 0\n").unwrap();
    let (code, _, err) = run(&["value", bad.to_str().unwrap(), "--type", "loc"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    assert_eq!(run(&["value", "/definitely/missing.game", "--type", "loc"]).0, 2);
    assert_eq!(run(&["value", &data("chsh.game"), "--type", "best"]).0, 2);
    assert_eq!(run(&["value", &data("chsh.game"), "--type", "loc", "--bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);

    let big = dir.path().join("big.game");
    std::fs::write(
        &big,
        "game 40 40 2 2\ndist ".to_string() + &vec!["0.000625"; 1600].join(" ") + "\n",
    )
    .unwrap();
    assert_eq!(run(&["value", big.to_str().unwrap(), "--type", "loc"]).0, 3);

    let corr = data("pr_box.corr");
    assert_eq!(run(&["check", &corr, "--test", "ns"]).0, 0);
    let broken = dir.path().join("broken.corr");
    std::fs::write(&broken, "corr 1 1 2 2\n0.5 0.5 0.5\n").unwrap();
    assert_eq!(run(&["check", broken.to_str().unwrap(), "--test", "ns"]).0, 2);
}

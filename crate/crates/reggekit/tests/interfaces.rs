//! CLI contract: subcommands, exit codes, artifact formats.

use std::process::Command;

use tempfile::tempdir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reggekit"))
}

#[test]
fn fixture_writes_file_and_exits_zero() {
    let dir = tempdir().unwrap();
    let out = bin()
        .args(["fixture", "--kind", "boundary-4-simplex", "--seed", "1"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("boundary-4-simplex.json").exists());
}

#[test]
fn unknown_fixture_kind_exits_two() {
    let dir = tempdir().unwrap();
    let out = bin()
        .args(["fixture", "--kind", "nonsense"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_exits_two() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"experiment":"deficit-table","bogus_key":1}"#).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(&cfg, r#"{"experiment":"no-such-experiment"}"#).unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_tolerance_exits_one() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("strict.json");
    // deficit-table against an unreachable reference
    std::fs::write(
        &cfg,
        r#"{"experiment":"deficit-table","reference_deficit":1.0,"tolerance":1e-12}"#,
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_emits_csv_and_json_artifacts_deterministically() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let closed_form = 2.0 * std::f64::consts::PI - 3.0 * (1.0f64 / 3.0).acos();
    std::fs::write(
        &cfg,
        format!(r#"{{"experiment":"deficit-table","reference_deficit":{closed_form},"tolerance":1e-9}}"#),
    )
    .unwrap();
    let run = |out_sub: &str| {
        let out_dir = dir.path().join(out_sub);
        let out = bin()
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .arg("--deterministic")
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(out_dir.join("deficit-table.csv")).unwrap()
    };
    let first = run("a");
    let second = run("b");
    assert_eq!(first, second);

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "case,label,value,reference,abs_error,pass");
    let row = lines.next().unwrap();
    // 17-significant-digit floats round-trip exactly
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - closed_form).abs() < 1e-9);
    assert!(dir.path().join("a").join("deficit-table.json").exists());
}

#[test]
fn fixture_then_run_round_trip() {
    let dir = tempdir().unwrap();
    let out = bin()
        .args(["fixture", "--kind", "perturbed-flat-grid", "--seed", "5"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"experiment":"deficit-table","complex_file":{:?}}}"#,
            dir.path().join("perturbed-flat-grid.json")
        ),
    )
    .unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

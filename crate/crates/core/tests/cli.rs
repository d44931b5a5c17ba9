use std::path::PathBuf;
use std::process::Command as Proc;

use compound_capacity::cli::{execute, Command, FmTarget, RunError};
use compound_capacity::config::RunConfig;
use compound_capacity::fm::Thm2Variant;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/configs")
        .join(name)
}

fn config(name: &str) -> RunConfig {
    RunConfig::from_path(&config_path(name)).unwrap()
}

fn ccap(args: &[&str]) -> std::process::Output {
    Proc::new(env!("CARGO_BIN_EXE_ccap"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn discrete_eval_surfaces_the_reduction() {
    let out = execute(Command::DiscreteEval, &config("mod_pair_marton.toml"), true).unwrap();
    assert!(out.violations.is_empty(), "{:?}", out.violations);
    assert!(out.report.contains("marton-pair equals compound-gp"));
    let csv = out.csv.unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv
        .lines()
        .next()
        .unwrap()
        .starts_with("bound,value_bits,raw_bits,clamped,argmin"));
}

#[test]
fn fm_verify_lists_the_three_bounds() {
    let out = execute(
        Command::FmVerify(FmTarget::Thm2(Thm2Variant::Full)),
        &RunConfig::default(),
        true,
    )
    .unwrap();
    assert!(out.violations.is_empty());
    for row in [
        "R < I(U,V1;Y1) - I(U;S) - I(V1;S|U)",
        "R < I(U,V2;Y2) - I(U;S) - I(V2;S|U)",
        "R < 1/2*I(U,V1;Y1) + 1/2*I(U,V2;Y2) - I(U;S) - 1/2*I(V1,V2;S|U) - 1/2*I(V1;V2|U)",
    ] {
        assert!(out.report.contains(row), "missing {row}");
    }
}

#[test]
fn every_command_passes_its_self_check() {
    let cases = [
        (Command::GdpSweep, "figure1.toml"),
        (Command::GdpPoint, "gdp_point.toml"),
        (Command::DiscreteEval, "mod_pair.toml"),
        (Command::DiscreteMaximize, "mod_pair.toml"),
        (Command::Feedback, "mod_pair.toml"),
        (Command::DegradedTest, "degraded_bsc.toml"),
        (Command::FmVerify(FmTarget::K(3)), "figure1.toml"),
    ];
    for (cmd, file) in cases {
        let out = execute(cmd, &config(file), true).unwrap();
        assert!(
            out.violations.is_empty(),
            "{}: {:?}",
            cmd.name(),
            out.violations
        );
        assert!(out.csv.is_some());
    }
}

#[test]
fn missing_sections_are_validation_errors() {
    let e = execute(Command::DegradedTest, &RunConfig::default(), false).unwrap_err();
    assert!(matches!(
        e,
        RunError::Missing {
            section: "degraded",
            ..
        }
    ));
    assert!(e.is_validation());
}

#[test]
fn binary_exit_codes() {
    let ok = ccap(&["gdp-sweep", "--points", "5", "--self-check"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 6);

    let bad = ccap(&["gdp-point", "--p", "-1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`--p`"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[gdp]\np = 1.0\n\nn = -0.1\n").unwrap();
    let bad = ccap(&["gdp-point", "--config", cfg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("line 4") && msg.contains("gdp.n"), "{msg}");

    let missing = ccap(&["gdp-point", "--config", "/nonexistent/ccap.toml"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deg.csv");
    let cfg = config_path("degraded_bsc.toml");
    let run = ccap(&[
        "degraded-test",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&run.stdout).contains("verdict: Feasible"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("verdict,feasible,residual\nFeasible,true,"));
}

#[test]
fn seeded_runs_are_reproducible() {
    let cfg = config("mod_pair.toml");
    let a = execute(Command::DiscreteMaximize, &cfg, false).unwrap();
    let b = execute(Command::DiscreteMaximize, &cfg, false).unwrap();
    assert_eq!(a, b);
}

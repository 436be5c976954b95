//! End-to-end runs of the `qfrob` binary over the fixture corpus: exit-code
//! contract, byte-stable machine-readable reports, and witness content.

use std::path::PathBuf;
use std::process::{Command as Process, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    p.display().to_string()
}

fn qfrob(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_qfrob"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[track_caller]
fn expect_exit(args: &[&str], code: i32) -> Output {
    let out = qfrob(args);
    assert_eq!(
        exit_code(&out),
        code,
        "args {:?}\nstdout:\n{}\nstderr:\n{}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn exit_code_contract_over_the_corpus() {
    // (command, fixture, expected exit code)
    let cases: &[(&str, &str, i32)] = &[
        ("check-curvature", "metric_flat.toml", 0),
        ("check-curvature", "metric_conformal_k1.toml", 0),
        ("check-curvature", "metric_conformal_wrong_k.toml", 1),
        ("check-pencil", "metric_pencil_compatible.toml", 0),
        ("check-pencil", "metric_pencil_incompatible.toml", 1),
        ("check-poisson", "bracket_constant.toml", 0),
        ("check-poisson", "bracket_flat_k1.toml", 1),
        ("check-poisson", "bracket_canonical_quadratic.toml", 0),
        ("check-pencil", "bracket_pencil_compatible.toml", 0),
        ("check-pencil", "bracket_pencil_incompatible.toml", 1),
        ("local-member", "bracket_pencil_compatible.toml", 0),
        ("residuals", "potential_linear.toml", 0),
        ("residuals", "potential_violating.toml", 1),
        ("residuals", "potential_commutative_quadratic.toml", 0),
        ("canonical", "potential_linear.toml", 0),
        ("canonical", "bracket_canonical_quadratic.toml", 0),
        ("canonical", "bracket_constant.toml", 0),
        ("check-wdvv", "scalar_antidiag.toml", 0),
        ("check-wdvv", "scalar_identity_eta.toml", 1),
        ("check-wdvv", "potential_commutative_quadratic.toml", 0),
        ("check-wdvv", "potential_violating.toml", 1),
        ("check-algebra", "algebra_novikov.toml", 0),
        ("check-algebra", "algebra_left_violation.toml", 1),
        ("check-algebra", "form_only.toml", 0),
        ("check-algebra", "potential_violating.toml", 0),
        ("check-algebra", "potential_linear.toml", 0),
    ];
    for (cmd, file, code) in cases {
        expect_exit(&[cmd, "--input", &fixture(file)], *code);
    }
}

#[test]
fn usage_and_parse_errors_exit_two() {
    expect_exit(
        &["check-curvature", "--input", &fixture("parse_error.toml")],
        2,
    );
    expect_exit(
        &["check-poisson", "--input", &fixture("bad_version.toml")],
        2,
    );
    expect_exit(&["residuals", "--input", &fixture("metric_flat.toml")], 2);
    expect_exit(
        &[
            "local-member",
            "--input",
            &fixture("metric_pencil_compatible.toml"),
        ],
        2,
    );
    expect_exit(&["check-poisson", "--input", "/no/such/file.toml"], 2);
    // canonical reconstruction needs flat-coordinate data in the file
    expect_exit(
        &["canonical", "--input", &fixture("bracket_flat_k1.toml")],
        2,
    );
    // clap-level usage error
    let out = qfrob(&["check-poisson"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn probabilistic_mode_can_report_indeterminate() {
    // sample-range 1 pins every coordinate to 1, where det(g) vanishes
    expect_exit(
        &[
            "check-curvature",
            "--input",
            &fixture("metric_generic.toml"),
            "--mode",
            "probabilistic",
            "--sample-range",
            "1",
        ],
        3,
    );
}

#[test]
fn machine_reports_are_byte_stable() {
    let cases: &[(&str, &str)] = &[
        ("check-poisson", "bracket_flat_k1.toml"),
        ("check-pencil", "metric_pencil_incompatible.toml"),
        ("residuals", "potential_violating.toml"),
        ("check-wdvv", "scalar_antidiag.toml"),
        ("check-algebra", "algebra_novikov.toml"),
        ("canonical", "bracket_canonical_quadratic.toml"),
        ("local-member", "bracket_pencil_compatible.toml"),
        ("check-curvature", "metric_conformal_k1.toml"),
    ];
    for (cmd, file) in cases {
        let args = [*cmd, "--input", &fixture(file), "--format", "json-like"];
        let a = qfrob(&args);
        let b = qfrob(&args);
        assert_eq!(a.stdout, b.stdout, "unstable json for {cmd} {file}");
        assert!(!a.stdout.is_empty());
        // and text output too
        let args = [*cmd, "--input", &fixture(file)];
        let a = qfrob(&args);
        let b = qfrob(&args);
        assert_eq!(a.stdout, b.stdout, "unstable text for {cmd} {file}");
    }
}

#[test]
fn parallel_flag_does_not_change_output() {
    for parallel in ["2", "4"] {
        let base = qfrob(&[
            "check-poisson",
            "--input",
            &fixture("bracket_canonical_quadratic.toml"),
            "--format",
            "json-like",
        ]);
        let par = qfrob(&[
            "check-poisson",
            "--input",
            &fixture("bracket_canonical_quadratic.toml"),
            "--format",
            "json-like",
            "--parallel",
            parallel,
        ]);
        // the config echo differs, the verdicts must not
        let base: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
        let par: serde_json::Value = serde_json::from_slice(&par.stdout).unwrap();
        assert_eq!(base["verdicts"], par["verdicts"]);
        assert_eq!(base["result"], par["result"]);
    }
}

#[test]
fn witnesses_carry_indices_and_truncated_residuals() {
    let out = expect_exit(
        &[
            "check-poisson",
            "--input",
            &fixture("bracket_flat_k1.toml"),
            "--format",
            "json-like",
        ],
        1,
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdicts = v["verdicts"].as_array().unwrap();
    let s4 = verdicts.iter().find(|e| e["check"] == "s4").unwrap();
    assert_eq!(s4["verdict"], "fail");
    assert_eq!(s4["witness"]["indices"], serde_json::json!([1, 1, 2, 2]));
    assert_eq!(s4["witness"]["residual"], "1");

    let out = expect_exit(
        &[
            "residuals",
            "--input",
            &fixture("potential_violating.toml"),
            "--format",
            "json-like",
        ],
        1,
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdicts = v["verdicts"].as_array().unwrap();
    let ass1 = verdicts.iter().find(|e| e["check"] == "ass1").unwrap();
    assert_eq!(ass1["verdict"], "pass");
    let ass2 = verdicts.iter().find(|e| e["check"] == "ass2").unwrap();
    assert_eq!(ass2["verdict"], "fail");
    assert_eq!(ass2["witness"]["indices"], serde_json::json!([1, 2, 1]));
}

#[test]
fn canonical_reconstruction_reports_potentials() {
    let out = expect_exit(
        &[
            "canonical",
            "--input",
            &fixture("bracket_canonical_quadratic.toml"),
            "--format",
            "json-like",
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entry = &v["verdicts"][0];
    assert_eq!(entry["check"], "canonical-form");
    assert_eq!(entry["data"]["h[1]"], "1/2*u1^2");
    assert_eq!(entry["data"]["h[2]"], "u1*u2");
}

#[test]
fn local_member_zeroes_the_nonlocal_tail() {
    let out = expect_exit(
        &[
            "local-member",
            "--input",
            &fixture("bracket_pencil_compatible.toml"),
            "--format",
            "json-like",
        ],
        0,
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let data = &v["verdicts"][0]["data"];
    assert_eq!(data["lambda0"], "0");
    assert_eq!(data["lambda1"], "-1");
}

#[test]
fn probabilistic_verdicts_agree_with_symbolic_on_the_corpus() {
    let cases: &[(&str, &str)] = &[
        ("check-poisson", "bracket_constant.toml"),
        ("check-poisson", "bracket_flat_k1.toml"),
        ("residuals", "potential_violating.toml"),
        ("check-wdvv", "scalar_identity_eta.toml"),
        ("check-algebra", "algebra_novikov.toml"),
    ];
    for (cmd, file) in cases {
        let sym = qfrob(&[cmd, "--input", &fixture(file), "--format", "json-like"]);
        let sym: serde_json::Value = serde_json::from_slice(&sym.stdout).unwrap();
        for seed in ["1", "17", "4242"] {
            let prob = qfrob(&[
                cmd,
                "--input",
                &fixture(file),
                "--format",
                "json-like",
                "--mode",
                "probabilistic",
                "--seed",
                seed,
            ]);
            let prob: serde_json::Value = serde_json::from_slice(&prob.stdout).unwrap();
            assert_eq!(sym["result"], prob["result"], "{cmd} {file} seed {seed}");
            let sv = sym["verdicts"].as_array().unwrap();
            let pv = prob["verdicts"].as_array().unwrap();
            assert_eq!(sv.len(), pv.len());
            for (s, p) in sv.iter().zip(pv) {
                assert_eq!(s["check"], p["check"]);
                assert_eq!(s["verdict"], p["verdict"], "{cmd} {file} seed {seed}");
            }
        }
    }
}

/// Machine reports must match the checked-in snapshots exactly — this pins
/// the report format itself, not just run-to-run stability.
#[test]
fn machine_reports_match_golden_snapshots() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let cases: &[(&str, &str, &str)] = &[
        (
            "check-poisson",
            "bracket_flat_k1.toml",
            "check_poisson_bracket_flat_k1.json",
        ),
        (
            "residuals",
            "potential_violating.toml",
            "residuals_potential_violating.json",
        ),
        (
            "local-member",
            "bracket_pencil_compatible.toml",
            "local_member_bracket_pencil.json",
        ),
        (
            "canonical",
            "bracket_canonical_quadratic.toml",
            "canonical_bracket_quadratic.json",
        ),
    ];
    for (cmd, input, golden) in cases {
        let out = Process::new(env!("CARGO_BIN_EXE_qfrob"))
            .current_dir(&manifest)
            .args([
                *cmd,
                "--input",
                format!("tests/fixtures/{input}").as_str(),
                "--format",
                "json-like",
            ])
            .output()
            .expect("binary runs");
        let expected = std::fs::read(manifest.join("tests/golden").join(golden)).unwrap();
        assert_eq!(
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&expected),
            "report drifted from {golden}"
        );
    }
}

#[test]
fn timings_flag_only_affects_text_output() {
    let plain = qfrob(&[
        "check-poisson",
        "--input",
        &fixture("bracket_constant.toml"),
    ]);
    let timed = qfrob(&[
        "check-poisson",
        "--input",
        &fixture("bracket_constant.toml"),
        "--timings",
    ]);
    let plain = String::from_utf8(plain.stdout).unwrap();
    let timed = String::from_utf8(timed.stdout).unwrap();
    assert!(!plain.contains("time "));
    assert!(timed.contains("time check-poisson"));
    assert!(timed.starts_with(plain.trim_end_matches('\n')));
}

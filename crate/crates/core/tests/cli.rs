//! Golden regression tests for the command-line interface.

use std::process::{Command, Output};

fn genus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = genus(args);
    assert!(
        out.status.success(),
        "genus {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn expand_goe_square() {
    let text = stdout(&["expand", "--expr", "tr(T T)"]);
    assert_eq!(text, "+1 * N^0\n+1 * N^-1\n");
}

#[test]
fn expand_odd_word_is_zero() {
    let text = stdout(&["expand", "--expr", "tr(Z)"]);
    assert_eq!(text, "0\n");
}

#[test]
fn expand_json_contains_worked_record() {
    let text = stdout(&[
        "expand",
        "--expr",
        "tr(Z Y1 Z Y2 Z' Y3 Z' Y4) tr(Z Y5 Z' Y6 Z Y7 Z' Y8)",
        "--json",
    ]);
    let records: serde_json::Value = serde_json::from_str(&text).unwrap();
    let wanted = serde_json::json!({
        "coefficient": 1,
        "n_exponent": -2,
        "c_exponent": 0,
        "traces": [["Y1", "Y3", "Y5t", "Y7t"], ["Y2"], ["Y4", "Y6t"], ["Y8"]],
    });
    assert!(
        records.as_array().unwrap().contains(&wanted),
        "missing record in {text}"
    );
}

#[test]
fn expand_json_is_byte_stable() {
    let args = ["expand", "--expr", "tr(Z Z' Z Z')", "--json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn unnormalized_flag_shifts_exponents() {
    let text = stdout(&["expand", "--expr", "tr(T T)", "--Tr"]);
    assert_eq!(text, "+1 * N^1\n+1 * N^0\n");
}

#[test]
fn chi_klein_bottle() {
    let text = stdout(&[
        "chi",
        "--gamma",
        "(1,2,3,4,5)(6,7,8)",
        "--pi",
        "(1,-7)(-1,7)(2,-4)(-2,4)(3,-6)(-3,6)(5,8)(-5,-8)",
    ]);
    assert!(text.contains("chi = 0"), "{text}");
    assert!(text.contains("components = 1"), "{text}");
    assert!(text.contains("nonorientable"), "{text}");
    assert!(text.contains("Klein bottle"), "{text}");
}

#[test]
fn chi_twisted_projective_plane() {
    let text = stdout(&["chi", "--gamma", "(1,2)", "--pi", "(1,-2)(-1,2)"]);
    assert!(text.contains("chi = 1"), "{text}");
    assert!(text.contains("projective plane"), "{text}");
}

#[test]
fn chi_identity_point() {
    let text = stdout(&["chi", "--gamma", "(1)", "--pi", ""]);
    assert!(text.contains("chi = 2"), "{text}");
    assert!(text.contains("sphere"), "{text}");
}

#[test]
fn limit_moment_covariance_and_spokes() {
    assert_eq!(stdout(&["limit", "--expr", "tr(Z Z' Z Z')"]), "2\n");
    assert_eq!(
        stdout(&[
            "limit",
            "--covariance",
            "tr(Z Z Z' Z')",
            "tr(Z Z' Z Z')",
        ]),
        "16\n"
    );
    assert_eq!(
        stdout(&[
            "limit",
            "--spokes",
            "Z Z Z'; T T; W W",
            "W W W W W; Z Z Z'; T T T T",
            "--c",
            "1",
        ]),
        "2070\n"
    );
}

#[test]
fn cumulant_of_centred_single_trace_vanishes() {
    assert_eq!(stdout(&["cumulant", "--trace", "{Z Z'}"]), "0\n");
}

#[test]
fn cumulant_matches_connected_expansion() {
    let via_cumulant = stdout(&["cumulant", "--trace", "T T", "--trace", "T T"]);
    let via_connected = stdout(&[
        "expand",
        "--expr",
        "tr(T T) tr(T T)",
        "--mode",
        "connected",
    ]);
    assert_eq!(via_cumulant, via_connected);
}

#[test]
fn export_dot_goe_single_edge() {
    let text = stdout(&["export-dot", "--expr", "tr(T T)", "--gluing-index", "0"]);
    assert!(text.starts_with("graph gluing {"), "{text}");
    assert_eq!(text.matches(" -- ").count(), 1);
    assert!(text.contains("twist=false"), "{text}");
}

#[test]
fn export_dot_by_explicit_premap() {
    let text = stdout(&[
        "export-dot",
        "--expr",
        "tr(Z Y1 Z Y2 Z' Y3 Z' Y4) tr(Z Y5 Z' Y6 Z Y7 Z' Y8)",
        "--pi",
        "(1,-7)(-1,7)(2,3)(-2,-3)(4,-6)(-4,6)(5,8)(-5,-8)",
    ]);
    assert_eq!(text.matches("kind=face").count(), 2);
    assert_eq!(text.matches("kind=vertex").count(), 4);
    assert_eq!(text.matches(" -- ").count(), 4);
    assert_eq!(text.matches("twist=true").count(), 2);
}

#[test]
fn mc_is_deterministic() {
    let args = [
        "mc", "--expr", "tr(T T)", "--N", "8", "--samples", "200", "--seed", "5",
    ];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(report["z_score"].as_f64().unwrap().abs() < 6.0);
}

#[test]
fn parse_failure_exits_2() {
    let out = genus(&["expand", "--expr", "tr("]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_violation_exits_3() {
    let word = vec!["Z"; 20].join(" ");
    let out = Command::new(env!("CARGO_BIN_EXE_genus"))
        .args(["expand", "--expr", &format!("tr({word})")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // the guard is adjustable through the environment
    let out = Command::new(env!("CARGO_BIN_EXE_genus"))
        .args(["limit", "--expr", &format!("tr({word})")])
        .env("GENUS_MAX_LETTERS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn contract_violation_exits_4() {
    let out = genus(&["expand", "--expr", "tr(X X)"]);
    assert_eq!(out.status.code(), Some(4));
}

//! End-to-end tests of the installed binary: exit codes, record shapes,
//! determinism, and config precedence.

use std::process::{Command, Output};

fn regl4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regl4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is a JSON record")
}

#[test]
fn eval_xi_hits_the_pinned_value() {
    let out = regl4(&["eval", "xi", "--s", "2"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    let re = rec["value_re"].as_f64().unwrap();
    assert!((re - std::f64::consts::PI / 6.0).abs() < 1e-12, "got {re}");
    assert_eq!(rec["value_im"].as_f64().unwrap(), 0.0);
    assert_eq!(rec["quantity"], "xi");
}

#[test]
fn eval_gauss_sum_is_real_for_the_quadratic_character() {
    let out = regl4(&["eval", "gauss_sum", "--modulus", "5", "--char", "quadratic"]);
    assert!(out.status.success());
    let rec = json(&out);
    assert!((rec["value_re"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-12);
    assert!(rec["value_im"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn eval_constant_term_carries_an_error_estimate() {
    let out = regl4(&["eval", "i2_constant", "--N", "5", "--char", "quadratic", "--T", "1"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    let err = rec["error_estimate"].as_f64().unwrap();
    assert!(err > 0.0 && err < 1e-3, "estimate {err}");

    // The record's value is the library's stencil assembly, bit for bit.
    let chi = regl4_core::characters::quadratic_character(5).unwrap();
    let dec = regl4_core::characters::CharacterDecomposition::new(&chi, 1).unwrap();
    let scen = regl4_core::i2::I2Scenario::new(&dec, 1.0).unwrap();
    let want =
        regl4_core::i2::i2_constant_term(&scen, &regl4_core::i2::XiLaurentData::measured())
            .unwrap();
    let got = rec["value_re"].as_f64().unwrap();
    assert!((got - want.re).abs() <= 1e-9 * want.re.abs(), "got {got}, want {}", want.re);

    // Grid-fit cross-check travels in the details block.
    let gap = rec["details"]["fit_gap"].as_f64().unwrap();
    assert!(gap < 1e-3 * want.norm(), "fit gap {gap}");
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let a = regl4(&["eval", "lfun", "--s", "0.7,1.3", "--modulus", "13"]);
    let b = regl4(&["eval", "lfun", "--s", "0.7,1.3", "--modulus", "13"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["sweep", "--axis", "eta", "--N", "5", "--char", "quadratic", "--eta-grid", "0.05,0.02"];
    let a = regl4(&args);
    let b = regl4(&args);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn flags_override_the_config_file() {
    let path = std::env::temp_dir().join(format!("regl4-cli-{}.conf", std::process::id()));
    std::fs::write(&path, "# comment line\nN=13\nT=2.0\nchar=first-even\n").unwrap();
    let out = regl4(&[
        "eval",
        "gauss_sum",
        "--config",
        path.to_str().unwrap(),
        "--T",
        "1",
    ]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    // Modulus came from the file; the height flag overrode the file's T but
    // gauss_sum only echoes the modulus and character.
    assert_eq!(rec["params"]["modulus"].as_u64().unwrap(), 13);

    let out = regl4(&[
        "eval",
        "i2_constant",
        "--config",
        path.to_str().unwrap(),
        "--N",
        "5",
        "--char",
        "quadratic",
        "--T",
        "1",
    ]);
    // Config file already deleted: reading it must be a usage error.
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults() {
    let path = std::env::temp_dir().join(format!("regl4-cli-b-{}.conf", std::process::id()));
    std::fs::write(&path, "N=5\nchar=quadratic\nT=2.0\n").unwrap();
    let out = regl4(&["eval", "i2_report", "--config", path.to_str().unwrap(), "--T", "1"]);
    std::fs::remove_file(&path).ok();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let rec = json(&out);
    assert_eq!(rec["params"]["N"].as_u64().unwrap(), 5);
    // Flag beats file.
    assert_eq!(rec["params"]["T"].as_f64().unwrap(), 1.0);
}

#[test]
fn usage_errors_exit_with_code_two() {
    // No level list for a level sweep.
    let out = regl4(&["sweep", "--axis", "n"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown quantity.
    let out = regl4(&["eval", "no_such_quantity"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown verify suite.
    let out = regl4(&["verify", "no_such_suite"]);
    assert_eq!(out.status.code(), Some(2));
    // Missing required argument flag.
    let out = regl4(&["eval", "xi"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed flag (clap's own exit).
    let out = regl4(&["eval", "xi", "--s"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn level_sweep_emits_the_fixed_table() {
    let out = regl4(&["sweep", "--axis", "n", "--N", "5,13", "--T", "1"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "table:\n{text}");
    assert_eq!(
        lines[0],
        "level,char,T,i2_constant_re,i2_constant_im,main_level,l_second_term,remainder,envelope,ratio"
    );
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10, "row: {row}");
        for f in &fields[2..] {
            assert!(f.parse::<f64>().unwrap().is_finite(), "field {f}");
        }
    }
    assert!(lines[1].starts_with("5,5.4,1"));
    assert!(lines[2].starts_with("13,13."));
}

#[test]
fn verify_characters_suite_passes() {
    let out = regl4(&["verify", "characters"]);
    assert!(out.status.success(), "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS characters/")).count() >= 4);
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("checks passed"));
}

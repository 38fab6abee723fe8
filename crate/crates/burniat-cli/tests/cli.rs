//! End-to-end tests of the binary: exit codes, report formats, fan dumps
//! and table validation, including the corrupted-tables path.

use std::fs;
use std::process::Command;

fn burniat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_burniat"))
}

#[test]
fn verify_all_cases_passes_with_exit_zero() {
    let output = burniat().args(["verify", "--format", "md"]).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("0 failed"));
    assert!(text.contains("◇ recorded"));
    for case in ["deg3", "deg4a", "deg4b", "deg5"] {
        assert!(text.contains(&format!("## Case {case}")), "{case} missing");
    }
}

#[test]
fn verify_single_case_json() {
    let output = burniat()
        .args(["verify", "--case", "4b", "--format", "json"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let cases = report["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 1);
    assert_eq!(cases[0]["case"], "deg4b");
    assert_eq!(cases[0]["fan"]["rays"].as_array().unwrap().len(), 8);
    assert_eq!(report["summary"]["fail"], 0);
}

#[test]
fn verify_markdown_mentions_the_eight_rays() {
    let output = burniat()
        .args(["verify", "--case", "4b", "--format", "md"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("deg4b.rays.count"));
    assert!(text.contains("Fan: 8 rays, 8 maximal cones."));
}

#[test]
fn verify_is_deterministic() {
    let run = || {
        burniat()
            .args(["verify", "--format", "json"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn corrupted_tables_fail_with_exit_one_naming_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tables.json");
    let mut tables: serde_json::Value =
        serde_json::from_str(include_str!("../../burniat-core/data/tables.json")).unwrap();
    tables["tables"][1]["rows"][1]["components"] = serde_json::json!(["#4(1)", "#4(1)"]);
    fs::write(&path, tables.to_string()).unwrap();

    let output = burniat()
        .args(["verify", "--tables"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8(output.stderr).unwrap();
    assert!(err.contains("tables.deg3.C"), "stderr was: {err}");
}

#[test]
fn unreadable_tables_file_is_an_internal_error() {
    let output = burniat()
        .args(["verify", "--tables", "/nonexistent/tables.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn dump_fan_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    for (case, rays, cones) in [("3", 2, 2), ("4a", 6, 6), ("4b", 8, 8), ("5", 18, 32)] {
        let path = dir.path().join(format!("fan-{case}.json"));
        let output = burniat()
            .args(["dump-fan", "--case", case, "--out"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(output.status.success());
        let bytes = fs::read(&path).unwrap();
        let fan: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(fan["rays"].as_array().unwrap().len(), rays);
        assert_eq!(fan["max_cones"].as_array().unwrap().len(), cones);

        // Dump again and compare bytes.
        let path2 = dir.path().join(format!("fan-{case}-again.json"));
        burniat()
            .args(["dump-fan", "--case", case, "--out"])
            .arg(&path2)
            .output()
            .unwrap();
        assert_eq!(bytes, fs::read(&path2).unwrap());
    }
}

#[test]
fn tables_validate_reports_normalizations() {
    let output = burniat().args(["tables", "--validate"]).output().unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("pass")).count(), 33);
    assert!(text.contains("stray closing parenthesis"));
    assert!(text.contains("missing '#' prefix"));
    assert!(text.contains("subscript contradicts the printed volume"));
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = burniat()
        .args(["verify", "--case", "3", "--format", "json", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["cases"][0]["case"], "deg3");
}

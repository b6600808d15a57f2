//! End-to-end exercises of the binary: exit codes, report contents, and
//! stream discipline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn oddfit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddfit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn validate_fixtures_passes() {
    let out = oddfit(&[
        "validate",
        fixture("case_study/requirement.odd").to_str().unwrap(),
        fixture("case_study/carla.odd").to_str().unwrap(),
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn validate_attribute_out_of_range_exits_one_with_one_violation() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.odd");
    let source = fs::read_to_string(fixture("case_study/requirement.odd"))
        .unwrap()
        .replace("assign safety_hazard_mitigation = 1", "assign safety_hazard_mitigation = 4");
    fs::write(&file, source).unwrap();
    let out = oddfit(&["validate", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("safety_hazard_mitigation"));
    assert!(err.contains("constraint-violation"));
}

#[test]
fn validate_missing_file_exits_two() {
    let out = oddfit(&["validate", "/nonexistent/nowhere.odd"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn validate_syntax_error_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.odd");
    fs::write(&file, "document x {\n  role requirement\n").unwrap();
    let out = oddfit(&["validate", file.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"));
}

#[test]
fn compare_carla_fails_on_sut_fidelity_only() {
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/carla.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/requirement.odd").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report = stdout(&out);
    assert!(report.starts_with("within: false"));
    let failing: Vec<&str> = report
        .lines()
        .filter(|line| line.ends_with("pass: false"))
        .collect();
    assert_eq!(failing.len(), 1, "{report}");
    assert!(report.contains("sut_fidelity"));
    // the conditional's resolution is visible in the trace
    assert!(report.contains("expression:"));
    assert!(report.contains("value: 1"));
}

#[test]
fn compare_scale_truck_passes() {
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/requirement.odd").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("within: true"));
}

#[test]
fn compare_document_with_itself_passes() {
    let req = fixture("case_study/requirement.odd");
    let out = oddfit(&[
        "compare",
        "--cap",
        req.to_str().unwrap(),
        "--req",
        req.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn compare_requirement_outside_glare_window_passes_carla() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("req200.odd");
    let source = fs::read_to_string(fixture("case_study/requirement.odd"))
        .unwrap()
        .replace("sun_azimuth_angle = 126.0", "sun_azimuth_angle = 200.0");
    fs::write(&file, source).unwrap();
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/carla.odd").to_str().unwrap(),
        "--req",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn compare_writes_report_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("verdict.json");
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/requirement.odd").to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = fs::read_to_string(&report).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["within"], serde_json::json!(true));
}

#[test]
fn compare_expression_capability_as_requirement_is_rejected() {
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/carla.odd").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("expression"));
}

fn case_study_dirs(dir: &Path) -> (PathBuf, PathBuf) {
    let req_dir = dir.join("req");
    let cap_dir = dir.join("cap");
    fs::create_dir_all(&req_dir).unwrap();
    fs::create_dir_all(&cap_dir).unwrap();
    fs::copy(
        fixture("case_study/requirement.odd"),
        req_dir.join("requirement.odd"),
    )
    .unwrap();
    fs::copy(fixture("case_study/carla.odd"), cap_dir.join("carla.odd")).unwrap();
    fs::copy(
        fixture("case_study/scale_truck.odd"),
        cap_dir.join("scale_truck.odd"),
    )
    .unwrap();
    (req_dir, cap_dir)
}

#[test]
fn allocate_case_study_is_fully_allocated() {
    let dir = tempfile::tempdir().unwrap();
    let (req_dir, cap_dir) = case_study_dirs(dir.path());
    let out = oddfit(&[
        "allocate",
        "--req-dir",
        req_dir.to_str().unwrap(),
        "--cap-dir",
        cap_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        report["feasible"]["odd_req"],
        serde_json::json!(["odd_cap_scale"])
    );
    assert_eq!(
        report["matrix"]["odd_req"]["odd_cap_carla"]["within"],
        serde_json::json!(false)
    );
    assert_eq!(
        report["matrix"]["odd_req"]["odd_cap_scale"]["within"],
        serde_json::json!(true)
    );
}

#[test]
fn allocate_impossible_requirement_exits_one_and_lists_the_case() {
    let dir = tempfile::tempdir().unwrap();
    let (req_dir, cap_dir) = case_study_dirs(dir.path());
    let impossible = fs::read_to_string(fixture("case_study/requirement.odd"))
        .unwrap()
        .replace("document odd_req", "document impossible")
        .replace("assign safety_hazard_mitigation = 1", "assign safety_hazard_mitigation = 3")
        .replace("assign test_complexity = 1", "assign test_complexity = 3")
        .replace("assign test_environment_fidelity = 2", "assign test_environment_fidelity = 3")
        .replace("assign sut_fidelity = 2", "assign sut_fidelity = 3");
    fs::write(req_dir.join("impossible.odd"), impossible).unwrap();
    let out = oddfit(&[
        "allocate",
        "--req-dir",
        req_dir.to_str().unwrap(),
        "--cap-dir",
        cap_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unallocatable: impossible"));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["unallocated"][0]["test_case"], serde_json::json!("impossible"));
    // the feasible case is still allocated
    assert_eq!(
        report["feasible"]["odd_req"],
        serde_json::json!(["odd_cap_scale"])
    );
}

#[test]
fn allocate_empty_requirement_dir_is_fully_allocated() {
    let dir = tempfile::tempdir().unwrap();
    let (req_dir, cap_dir) = case_study_dirs(dir.path());
    for entry in fs::read_dir(&req_dir).unwrap() {
        fs::remove_file(entry.unwrap().path()).unwrap();
    }
    let out = oddfit(&[
        "allocate",
        "--req-dir",
        req_dir.to_str().unwrap(),
        "--cap-dir",
        cap_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["test_cases"], serde_json::json!([]));
    assert_eq!(report["matrix"], serde_json::json!({}));
    assert_eq!(report["unallocated"], serde_json::json!([]));
}

#[test]
fn anonymous_environment_takes_id_from_file_stem() {
    let dir = tempfile::tempdir().unwrap();
    let (req_dir, cap_dir) = case_study_dirs(dir.path());
    let anonymous = fs::read_to_string(fixture("case_study/scale_truck.odd"))
        .unwrap()
        .replace("document odd_cap_scale {", "document {");
    fs::write(cap_dir.join("Rig-Two.odd"), anonymous).unwrap();
    let out = oddfit(&[
        "allocate",
        "--req-dir",
        req_dir.to_str().unwrap(),
        "--cap-dir",
        cap_dir.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        report["feasible"]["odd_req"],
        serde_json::json!(["odd_cap_scale", "rig_two"])
    );
}

#[test]
fn viz_writes_plantuml_for_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("req.puml");
    let out = oddfit(&[
        "viz",
        "--doc",
        fixture("case_study/requirement.odd").to_str().unwrap(),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&out_file).unwrap();
    assert!(text.starts_with("@startuml"));
    assert!(text.ends_with("@enduml\n"));
    assert!(text.contains("sun_elevation_angle = 6.0"));
}

#[test]
fn viz_renders_conditional_source_text() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("carla.puml");
    let out = oddfit(&[
        "viz",
        "--doc",
        fixture("case_study/carla.odd").to_str().unwrap(),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&out_file).unwrap();
    assert!(text.contains("sut_fidelity = if"));
    assert!(text.contains("then 1 else 2"));
}

#[test]
fn viz_missing_file_exits_two() {
    let out = oddfit(&["viz", "--doc", "/nonexistent.odd", "--out", "/tmp/x.puml"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compare_reports_are_byte_identical_across_runs() {
    let cap = fixture("case_study/carla.odd");
    let req = fixture("case_study/requirement.odd");
    let args = [
        "compare",
        "--cap",
        cap.to_str().unwrap(),
        "--req",
        req.to_str().unwrap(),
    ];
    let first = oddfit(&args);
    let second = oddfit(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&oddfit(&[])), 2);
    assert_eq!(code(&oddfit(&["bogus"])), 2);
    assert_eq!(code(&oddfit(&["compare", "--cap"])), 2);
    assert_eq!(code(&oddfit(&["compare", "--format", "xml"])), 2);
    assert_eq!(code(&oddfit(&["help"])), 0);
}

#[test]
fn user_taxonomy_files_extend_the_builtin_registry() {
    let dir = tempfile::tempdir().unwrap();
    let tax_file = dir.path().join("project.odd");
    fs::write(
        &tax_file,
        "taxonomy project extends ext_odd {\n  branch site {\n    leaf dock_count: integer range 0..50\n  }\n}\n",
    )
    .unwrap();
    let doc_file = dir.path().join("doc.odd");
    let source = fs::read_to_string(fixture("case_study/requirement.odd"))
        .unwrap()
        .replace("taxonomy ext_odd", "taxonomy project")
        .replace(
            "assign safety_hazard_mitigation = 1",
            "assign site/dock_count = 3\n  assign safety_hazard_mitigation = 1",
        );
    fs::write(&doc_file, source).unwrap();
    let out = oddfit(&[
        "validate",
        "--taxonomy",
        tax_file.to_str().unwrap(),
        doc_file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

#[test]
fn canonical_yaml_documents_are_accepted_as_input() {
    let dir = tempfile::tempdir().unwrap();
    // export the requirement to canonical YAML, then compare using it
    let req = oddfit_core::fixtures::parse_fixture(oddfit_core::fixtures::REQUIREMENT);
    let yaml = oddfit_core::export::to_canonical_text(&req, oddfit_core::export::Format::Yaml);
    let file = dir.path().join("req.yaml");
    fs::write(&file, yaml).unwrap();
    let out = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
        "--req",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
}

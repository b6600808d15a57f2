//! Acceptance suite: one test per release criterion, each printing a
//! pass line (run with `--nocapture` to see them).
//!
//! 1. Case-study reproduction through the CLI (CARLA out, scale truck in).
//! 2. Exact conditional boundary behavior of the glare rule.
//! 3. Tree-walk containment agrees with a flat per-leaf oracle (>= 1000 runs).
//! 4. Reflexivity and widening-chain transitivity (200 runs each).
//! 5. Ordinal attribute constraint enforcement (50 constructed breaches).
//! 6. Canonical YAML/JSON round-trip fidelity (100 documents).
//! 7. Byte-identical allocation reports under shuffled file enumeration.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use oddfit_core::compare::{compare_leaf, generic_compare};
use oddfit_core::eval::{concretize_capability, evaluate_expression, ConcretizeError, EvaluationContext};
use oddfit_core::export::{document_from_text, to_canonical_text, Format};
use oddfit_core::fixtures;
use oddfit_core::model::{
    validate_document, LeafValue, OddDocument, Role, Taxonomy, ViolationCode,
};
use oddfit_core::path::NodePath;
use oddfit_core::synth::Synth;

use rand::seq::SliceRandom;
use rand::{rngs::StdRng, SeedableRng};

const AZIMUTH: &str = "environment/illumination/natural_illumination/sun_azimuth_angle";
const ELEVATION: &str = "environment/illumination/natural_illumination/sun_elevation_angle";

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

fn path(text: &str) -> NodePath {
    NodePath::parse(text).unwrap()
}

#[test]
fn criterion_1_case_study_reproduction() {
    let started = Instant::now();

    let carla = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/carla.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/requirement.odd").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(carla.status.code(), Some(1), "CARLA comparison exits not-within");
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8(carla.stdout).unwrap()).unwrap();
    assert_eq!(report["within"], serde_json::json!(false));
    let failing: Vec<&serde_json::Value> = report["leaf_verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["pass"] == serde_json::json!(false))
        .collect();
    assert_eq!(failing.len(), 1, "exactly one failing leaf");
    assert_eq!(failing[0]["path"], serde_json::json!("sut_fidelity"));
    assert_eq!(failing[0]["requirement"], serde_json::json!(2));
    assert_eq!(failing[0]["capability"], serde_json::json!(1));

    let scale = oddfit(&[
        "compare",
        "--cap",
        fixture("case_study/scale_truck.odd").to_str().unwrap(),
        "--req",
        fixture("case_study/requirement.odd").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(scale.status.code(), Some(0), "scale-truck comparison exits within");
    let report: serde_json::Value =
        serde_json::from_str(&String::from_utf8(scale.stdout).unwrap()).unwrap();
    assert_eq!(report["within"], serde_json::json!(true));

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "case-study comparisons took {elapsed:?}, limit is 1 s"
    );
    println!(
        "criterion 1: PASS — CARLA not-within (sole failing leaf sut_fidelity 2 vs 1), \
         scale truck within, in {elapsed:?}"
    );
}

#[test]
fn criterion_2_conditional_boundary_behavior() {
    let carla = fixtures::parse_fixture(fixtures::CARLA_CAPABILITY);
    let expr = match carla.get_leaf(&NodePath::from_name("sut_fidelity")).unwrap() {
        LeafValue::Expression(expr) => expr.clone(),
        other => panic!("expected the conditional, got {other:?}"),
    };
    let mut req = fixtures::parse_fixture(fixtures::REQUIREMENT);
    let mut eval_at = |azimuth: f64, elevation: f64| -> LeafValue {
        req.assign(path(AZIMUTH), LeafValue::real(azimuth));
        req.assign(path(ELEVATION), LeafValue::real(elevation));
        let ctx = EvaluationContext { requirement: &req };
        evaluate_expression(&expr, &ctx).unwrap()
    };

    let low = [(116.0, 10.0), (136.0, 10.0), (126.0, 6.0)];
    let high = [(115.999, 6.0), (136.001, 6.0), (126.0, 10.001)];
    for (azimuth, elevation) in low {
        assert_eq!(
            eval_at(azimuth, elevation),
            LeafValue::Integer(1),
            "({azimuth}, {elevation}) must resolve to 1"
        );
    }
    for (azimuth, elevation) in high {
        assert_eq!(
            eval_at(azimuth, elevation),
            LeafValue::Integer(2),
            "({azimuth}, {elevation}) must resolve to 2"
        );
    }
    println!(
        "criterion 2: PASS — glare conditional exact at all six boundary points (3x level 1, 3x level 2)"
    );
}

/// Independent of the tree walk: enumerate (path, req, cap) triples and
/// conjoin `compare_leaf` outcomes; a requirement path the capability
/// does not assign fails.
fn flat_oracle(req: &OddDocument, cap: &OddDocument, tax: &Taxonomy) -> bool {
    req.assignments().iter().all(|(path, req_value)| {
        match cap.assignments().get(path) {
            None => false,
            Some(cap_value) => {
                let leaf_type = tax.leaf_type(path).expect("validated");
                compare_leaf(path, req_value, cap_value, leaf_type)
                    .map(|verdict| verdict.pass)
                    .unwrap_or(false)
            }
        }
    })
}

#[test]
fn criterion_3_oracle_equivalence() {
    const RUNS: u64 = 1000;
    let started = Instant::now();
    let mut agreements = 0u64;
    let mut within_count = 0u64;
    for seed in 0..RUNS {
        let mut synth = Synth::new(0x0dd_f17 + seed);
        let tax = synth.taxonomy("t", 30);
        assert!(tax.leaf_paths().len() <= 30);
        let req = synth.requirement(&tax, "req");
        let cap = synth.concrete_capability(&tax, "cap");
        assert!(validate_document(&req, &tax).is_empty());
        assert!(validate_document(&cap, &tax).is_empty());

        let expected = flat_oracle(&req, &cap, &tax);
        let verdict = generic_compare(&cap, &req, &tax).unwrap();
        assert_eq!(
            verdict.within, expected,
            "seed {seed}: tree walk and flat oracle disagree"
        );
        agreements += 1;
        if verdict.within {
            within_count += 1;
        }
    }
    let elapsed = started.elapsed();
    assert_eq!(agreements, RUNS);
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "{RUNS} oracle runs took {elapsed:?}, limit is 10 s"
    );
    println!(
        "criterion 3: PASS — {RUNS}/{RUNS} oracle agreements ({within_count} within) in {elapsed:?}"
    );
}

#[test]
fn criterion_4_order_theoretic_properties() {
    const RUNS: u64 = 200;
    for seed in 0..RUNS {
        let mut synth = Synth::new(0x2ef1e0 + seed);
        let tax = synth.taxonomy("t", 25);
        let doc = synth.requirement(&tax, "doc");
        let verdict = generic_compare(&doc.with_role(Role::Capability), &doc, &tax).unwrap();
        assert!(verdict.within, "seed {seed}: reflexivity failed");
    }
    for seed in 0..RUNS {
        let mut synth = Synth::new(0x74a250 + seed);
        let tax = synth.taxonomy("t", 25);
        let req = synth.requirement(&tax, "req");
        let cap_a = synth.widened_capability(&req, &tax, "cap_a");
        let cap_b = synth.widened_capability(&cap_a, &tax, "cap_b");
        assert!(
            generic_compare(&cap_a, &req, &tax).unwrap().within,
            "seed {seed}: req within capA"
        );
        assert!(
            generic_compare(&cap_b, &cap_a.with_role(Role::Requirement), &tax)
                .unwrap()
                .within,
            "seed {seed}: capA within capB"
        );
        assert!(
            generic_compare(&cap_b, &req, &tax).unwrap().within,
            "seed {seed}: transitivity failed"
        );
    }
    println!(
        "criterion 4: PASS — reflexivity on {RUNS}/{RUNS} documents, transitivity on {RUNS}/{RUNS} widened chains"
    );
}

#[test]
fn criterion_5_attribute_constraint_enforcement() {
    let registry = fixtures::builtin_registry();
    let tax = registry.get("ext_odd").unwrap();
    let req = fixtures::parse_fixture(fixtures::REQUIREMENT);
    let carla = fixtures::parse_fixture(fixtures::CARLA_CAPABILITY);
    let attribute_names = oddfit_core::model::TEST_ATTRIBUTE_NAMES;
    let bad_levels: [i64; 10] = [0, 4, -1, 5, -3, 7, 100, -100, 42, i64::MIN / 4];

    let mut caught = 0usize;
    let mut constructed = 0usize;
    for (i, bad) in (0..50).zip(bad_levels.iter().cycle()) {
        let attr = NodePath::from_name(attribute_names[i % 4]);
        constructed += 1;
        if i % 2 == 0 {
            // direct document with an out-of-range level
            let mut doc = if i % 4 < 2 {
                req.clone()
            } else {
                carla.clone().with_role(Role::Capability)
            };
            doc.assign(attr.clone(), LeafValue::Integer(*bad));
            let violations = validate_document(&doc, tax);
            let hit = violations.iter().any(|v| {
                v.code == ViolationCode::ConstraintViolation && v.path.as_ref() == Some(&attr)
            });
            assert!(hit, "case {i}: level {bad} on {attr} must be rejected");
            caught += 1;
        } else {
            // capability whose expression evaluates out of range
            let mut cap = carla.clone();
            cap.assign(
                attr.clone(),
                LeafValue::expression(oddfit_core::parse_expression(&bad.to_string()).unwrap()),
            );
            match concretize_capability(&cap, &req, tax) {
                Err(ConcretizeError::InvalidResult { violations }) => {
                    let hit = violations.iter().any(|v| {
                        v.code == ViolationCode::ConstraintViolation
                            && v.path.as_ref() == Some(&attr)
                    });
                    assert!(hit, "case {i}: concretized level {bad} must be rejected");
                    caught += 1;
                }
                other => panic!("case {i}: concretization must fail validation, got {other:?}"),
            }
        }
    }
    assert_eq!(constructed, 50);
    assert_eq!(caught, 50);
    println!(
        "criterion 5: PASS — {caught}/{constructed} out-of-range attribute levels rejected \
         (direct documents and concretization results)"
    );
}

#[test]
fn criterion_6_round_trip_fidelity() {
    const DOCS: u64 = 100;
    let mut checked = 0u64;
    for seed in 0..DOCS {
        let mut synth = Synth::new(0x2000d0 + seed);
        let tax = synth.taxonomy("t", 25);
        let mut registry = oddfit_core::TaxonomyRegistry::new();
        registry.insert(tax.clone()).unwrap();
        let doc = match seed % 3 {
            0 => synth.requirement(&tax, "doc"),
            1 => synth.concrete_capability(&tax, "doc"),
            _ => synth.conditional_capability(&tax, "doc"),
        };
        assert!(validate_document(&doc, &tax).is_empty());
        for format in [Format::Yaml, Format::Json] {
            let text = to_canonical_text(&doc, format);
            let back = document_from_text(&text, format, &registry)
                .unwrap_or_else(|e| panic!("seed {seed} {}: {e}", format.name()));
            assert_eq!(back, doc, "seed {seed} {} round trip", format.name());
        }
        checked += 1;
    }
    assert_eq!(checked, DOCS);
    println!(
        "criterion 6: PASS — {DOCS}/{DOCS} documents identical after serialize/parse in YAML and JSON"
    );
}

#[test]
fn criterion_7_allocation_determinism() {
    const RUNS: usize = 20;
    // one synthetic suite: 10 test cases, 4 environments, one taxonomy
    let mut synth = Synth::new(0xa110c);
    let tax = synth.taxonomy("suite", 20);
    let tax_source = grammar_taxonomy_source(&tax);

    let mut registry = oddfit_core::TaxonomyRegistry::new();
    registry.insert(tax.clone()).unwrap();
    let mut files: Vec<(String, String)> = Vec::new();
    for i in 0..10 {
        let doc = synth.requirement(&tax, &format!("case_{i}"));
        files.push((
            format!("req:{}", doc.id()),
            to_canonical_text(&doc, Format::Yaml),
        ));
    }
    for i in 0..4 {
        let doc = synth.concrete_capability(&tax, &format!("env_{i}"));
        files.push((
            format!("cap:{}", doc.id()),
            to_canonical_text(&doc, Format::Yaml),
        ));
    }

    let mut reports: Vec<Vec<u8>> = Vec::new();
    for run in 0..RUNS {
        let dir = tempfile::tempdir().unwrap();
        let req_dir = dir.path().join("req");
        let cap_dir = dir.path().join("cap");
        fs::create_dir_all(&req_dir).unwrap();
        fs::create_dir_all(&cap_dir).unwrap();
        let tax_file = dir.path().join("suite.odd");
        fs::write(&tax_file, &tax_source).unwrap();

        // shuffle creation order and file-name prefixes so directory
        // enumeration order differs from run to run
        let mut order: Vec<usize> = (0..files.len()).collect();
        order.shuffle(&mut StdRng::seed_from_u64(run as u64));
        for (position, file_index) in order.iter().enumerate() {
            let (tag, content) = &files[*file_index];
            let (kind, id) = tag.split_once(':').unwrap();
            let target = if kind == "req" { &req_dir } else { &cap_dir };
            fs::write(target.join(format!("{position:02}_{id}.yaml")), content).unwrap();
        }

        let out = oddfit(&[
            "allocate",
            "--req-dir",
            req_dir.to_str().unwrap(),
            "--cap-dir",
            cap_dir.to_str().unwrap(),
            "--taxonomy",
            tax_file.to_str().unwrap(),
            "--format",
            "yaml",
        ]);
        assert!(
            matches!(out.status.code(), Some(0) | Some(1)),
            "allocation must run: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        reports.push(out.stdout);
    }
    let first = &reports[0];
    assert!(!first.is_empty());
    for (run, report) in reports.iter().enumerate() {
        assert_eq!(
            report, first,
            "run {run} produced a different report byte stream"
        );
    }
    println!(
        "criterion 7: PASS — {RUNS}/{RUNS} shuffled-order allocation runs byte-identical \
         ({} report bytes)",
        first.len()
    );
}

// Taxonomies load from grammar text; render the generated taxonomy back
// into that form.
fn grammar_taxonomy_source(tax: &Taxonomy) -> String {
    fn node_text(node: &oddfit_core::TaxonomyNode, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match node.leaf_type() {
            None => {
                out.push_str(&format!("{pad}branch {} {{\n", node.name()));
                for child in node.children() {
                    node_text(child, indent + 1, out);
                }
                out.push_str(&format!("{pad}}}\n"));
            }
            Some(leaf_type) => {
                out.push_str(&format!("{pad}leaf {}: {}", node.name(), leaf_type.kind().name()));
                if let Some(unit) = leaf_type.unit() {
                    out.push_str(&format!(" unit \"{unit}\""));
                }
                if let Some(range) = leaf_type.constraint() {
                    out.push_str(&format!(" range {:?}..{:?}", range.lower(), range.upper()));
                }
                if node.required() {
                    out.push_str(" required");
                }
                out.push('\n');
            }
        }
    }
    let mut out = format!("taxonomy {} {{\n", tax.id());
    for node in tax.nodes() {
        node_text(node, 1, &mut out);
    }
    out.push_str("}\n");
    out
}

//! Canonical intermediate tree shared by the YAML and JSON writers, and
//! the builders that lay out each exported object.
//!
//! One layout, two surface syntaxes: maps keep the insertion order the
//! builders choose (assignment maps are sorted by path), reals render
//! with their shortest round-trip representation, and every run produces
//! identical text for equal inputs.

use crate::allocate::AllocationReport;
use crate::compare::{ComparisonVerdict, LeafVerdict};
use crate::eval::TraceEntry;
use crate::model::document::OddDocument;
use crate::model::taxonomy::{Taxonomy, TaxonomyNode};
use crate::model::value::{canon_real, LeafValue};

#[derive(Debug, Clone, PartialEq)]
pub enum Canon {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    Seq(Vec<Canon>),
    Map(Vec<(String, Canon)>),
}

impl Canon {
    pub fn is_scalar(&self) -> bool {
        !matches!(self, Canon::Seq(_) | Canon::Map(_))
    }

    pub fn str(text: impl Into<String>) -> Canon {
        Canon::Str(text.into())
    }
}

/// Shortest representation that parses back to the same 64-bit real,
/// always carrying a decimal point or exponent.
pub fn real_text(value: f64) -> String {
    format!("{:?}", canon_real(value))
}

/// How a leaf value appears in canonical text: primitives map to native
/// scalars, durations and data sizes keep their literal suffix form,
/// intervals are two-element arrays, text sets are sorted string arrays,
/// and expressions are `{expr: "<source>"}`.
pub fn value_canon(value: &LeafValue) -> Canon {
    match value {
        LeafValue::Boolean(b) => Canon::Bool(*b),
        LeafValue::Text(s) => Canon::str(s.clone()),
        LeafValue::Integer(i) => Canon::Int(*i),
        LeafValue::Real(r) => Canon::Real(canon_real(*r)),
        LeafValue::Duration(_) | LeafValue::DataSize(_) => Canon::str(value.to_literal_text()),
        LeafValue::TextSet(items) => {
            Canon::Seq(items.iter().map(|s| Canon::str(s.clone())).collect())
        }
        LeafValue::Interval(interval) => Canon::Seq(vec![
            Canon::Real(interval.lower()),
            Canon::Real(interval.upper()),
        ]),
        LeafValue::Expression(expr) => {
            Canon::Map(vec![("expr".to_string(), Canon::str(expr.print()))])
        }
    }
}

pub fn document_canon(doc: &OddDocument) -> Canon {
    let assignments: Vec<(String, Canon)> = doc
        .assignments()
        .iter()
        .map(|(path, value)| (path.as_str().to_string(), value_canon(value)))
        .collect();
    Canon::Map(vec![
        ("id".to_string(), Canon::str(doc.id())),
        ("role".to_string(), Canon::str(doc.role().name())),
        ("taxonomy".to_string(), Canon::str(doc.taxonomy_id())),
        ("assignments".to_string(), Canon::Map(assignments)),
    ])
}

pub fn taxonomy_canon(tax: &Taxonomy) -> Canon {
    let mut fields = vec![("id".to_string(), Canon::str(tax.id()))];
    if let Some(base) = tax.extends() {
        fields.push(("extends".to_string(), Canon::str(base)));
    }
    fields.push((
        "nodes".to_string(),
        Canon::Seq(tax.nodes().iter().map(node_canon).collect()),
    ));
    Canon::Map(fields)
}

fn node_canon(node: &TaxonomyNode) -> Canon {
    let mut fields = vec![("name".to_string(), Canon::str(node.name()))];
    match node.leaf_type() {
        None => {
            fields.push(("kind".to_string(), Canon::str("branch")));
            fields.push((
                "children".to_string(),
                Canon::Seq(node.children().iter().map(node_canon).collect()),
            ));
        }
        Some(leaf_type) => {
            fields.push(("kind".to_string(), Canon::str("leaf")));
            fields.push(("type".to_string(), Canon::str(leaf_type.kind().name())));
            if let Some(unit) = leaf_type.unit() {
                fields.push(("unit".to_string(), Canon::str(unit)));
            }
            if let Some(range) = leaf_type.constraint() {
                fields.push((
                    "range".to_string(),
                    Canon::Seq(vec![Canon::Real(range.lower()), Canon::Real(range.upper())]),
                ));
            }
            if node.required() {
                fields.push(("required".to_string(), Canon::Bool(true)));
            }
        }
    }
    Canon::Map(fields)
}

fn leaf_verdict_canon(verdict: &LeafVerdict) -> Canon {
    let mut fields = vec![
        ("path".to_string(), Canon::str(verdict.path.as_str())),
        ("rule".to_string(), Canon::str(verdict.rule.label())),
        ("requirement".to_string(), value_canon(&verdict.requirement)),
    ];
    if let Some(capability) = &verdict.capability {
        fields.push(("capability".to_string(), value_canon(capability)));
    }
    fields.push(("pass".to_string(), Canon::Bool(verdict.pass)));
    fields.push(("message".to_string(), Canon::str(verdict.message.clone())));
    Canon::Map(fields)
}

fn trace_canon(trace: &[TraceEntry]) -> Canon {
    Canon::Seq(
        trace
            .iter()
            .map(|entry| {
                Canon::Map(vec![
                    ("path".to_string(), Canon::str(entry.path.as_str())),
                    ("expression".to_string(), Canon::str(entry.expression.clone())),
                    ("value".to_string(), value_canon(&entry.value)),
                ])
            })
            .collect(),
    )
}

pub fn verdict_canon(verdict: &ComparisonVerdict) -> Canon {
    Canon::Map(vec![
        ("within".to_string(), Canon::Bool(verdict.within)),
        (
            "leaf_verdicts".to_string(),
            Canon::Seq(verdict.leaf_verdicts.iter().map(leaf_verdict_canon).collect()),
        ),
        ("trace".to_string(), trace_canon(&verdict.trace)),
    ])
}

pub fn report_canon(report: &AllocationReport) -> Canon {
    let environments = Canon::Seq(
        report
            .environments
            .iter()
            .map(|(id, name)| {
                Canon::Map(vec![
                    ("id".to_string(), Canon::str(id.clone())),
                    ("name".to_string(), Canon::str(name.clone())),
                ])
            })
            .collect(),
    );
    let test_cases = Canon::Seq(
        report
            .test_cases
            .iter()
            .map(|id| Canon::str(id.clone()))
            .collect(),
    );

    let mut matrix_rows: Vec<(String, Canon)> = Vec::new();
    for case in &report.test_cases {
        let row: Vec<(String, Canon)> = report
            .matrix
            .iter()
            .filter(|((c, _), _)| c == case)
            .map(|((_, env), verdict)| (env.clone(), verdict_canon(verdict)))
            .collect();
        matrix_rows.push((case.clone(), Canon::Map(row)));
    }

    let feasible: Vec<(String, Canon)> = report
        .feasible
        .iter()
        .map(|(case, envs)| {
            (
                case.clone(),
                Canon::Seq(envs.iter().map(|e| Canon::str(e.clone())).collect()),
            )
        })
        .collect();

    let unallocated = Canon::Seq(
        report
            .unallocated
            .iter()
            .map(|case| {
                let failures: Vec<(String, Canon)> = case
                    .failures
                    .iter()
                    .map(|(env, lines)| {
                        (
                            env.clone(),
                            Canon::Seq(lines.iter().map(|l| Canon::str(l.clone())).collect()),
                        )
                    })
                    .collect();
                Canon::Map(vec![
                    ("test_case".to_string(), Canon::str(case.test_case.clone())),
                    ("failures".to_string(), Canon::Map(failures)),
                ])
            })
            .collect(),
    );

    Canon::Map(vec![
        ("test_cases".to_string(), test_cases),
        ("environments".to_string(), environments),
        ("matrix".to_string(), Canon::Map(matrix_rows)),
        ("feasible".to_string(), Canon::Map(feasible)),
        ("unallocated".to_string(), unallocated),
    ])
}

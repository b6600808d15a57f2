//! Recursive containment check: is a requirement within a capability?
//!
//! Text and boolean leaves compare for equality; numeric leaves
//! (integers, reals, durations, data sizes, and the ordinal attributes)
//! pass when the requirement does not exceed the capability; interval
//! and text-set capabilities pass by containment and membership. A path
//! assigned in the requirement but absent from the capability fails
//! conservatively; a path assigned only in the capability is ignored.

use thiserror::Error;

use crate::eval::{concretize_capability, ConcretizeError, TraceEntry};
use crate::model::document::OddDocument;
use crate::model::taxonomy::Taxonomy;
use crate::model::value::{is_test_attribute, LeafKind, LeafType, LeafValue};
use crate::path::NodePath;

/// Which comparison rule decided a leaf verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictRule {
    Equality,
    NumericLeq,
    IntervalContainment,
    SetMembership,
    OrdinalLeq,
    MissingInCapability,
}

impl VerdictRule {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictRule::Equality => "equality",
            VerdictRule::NumericLeq => "numeric-leq",
            VerdictRule::IntervalContainment => "interval-containment",
            VerdictRule::SetMembership => "set-membership",
            VerdictRule::OrdinalLeq => "ordinal-leq",
            VerdictRule::MissingInCapability => "missing-in-capability",
        }
    }
}

/// Outcome of comparing one leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafVerdict {
    pub path: NodePath,
    pub requirement: LeafValue,
    /// `None` when the capability does not assign the path.
    pub capability: Option<LeafValue>,
    pub rule: VerdictRule,
    pub pass: bool,
    pub message: String,
}

/// Overall containment verdict with per-leaf diagnostics and the
/// concretization trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub within: bool,
    pub leaf_verdicts: Vec<LeafVerdict>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error("{path}: cannot compare {req_kind} requirement against {cap_kind} capability")]
    TypeError {
        path: NodePath,
        req_kind: &'static str,
        cap_kind: &'static str,
    },
    #[error("{path}: leaf still holds an unevaluated expression")]
    UnevaluatedExpression { path: NodePath },
    #[error("path {path} is not a leaf of taxonomy {taxonomy:?}")]
    UnknownPath { path: NodePath, taxonomy: String },
    #[error(transparent)]
    Concretize(#[from] ConcretizeError),
}

/// Compares one requirement value against one capability value.
///
/// `leaf_type` is the declared type at `path`; the ordinal rule applies
/// to the four integer test-environment attributes.
pub fn compare_leaf(
    path: &NodePath,
    req_value: &LeafValue,
    cap_value: &LeafValue,
    leaf_type: &LeafType,
) -> Result<LeafVerdict, CompareError> {
    use LeafValue::*;

    if !req_value.is_concrete() || !cap_value.is_concrete() {
        return Err(CompareError::UnevaluatedExpression { path: path.clone() });
    }

    let ordinal = leaf_type.kind() == LeafKind::Integer && is_test_attribute(path);
    let type_error = || CompareError::TypeError {
        path: path.clone(),
        req_kind: req_value.kind_label(),
        cap_kind: cap_value.kind_label(),
    };

    let (rule, pass) = match (req_value, cap_value) {
        (Boolean(r), Boolean(c)) => (VerdictRule::Equality, r == c),
        (Text(r), Text(c)) => (VerdictRule::Equality, r == c),
        (Text(r), TextSet(c)) => (VerdictRule::SetMembership, c.contains(r)),
        (TextSet(r), TextSet(c)) => (VerdictRule::SetMembership, r.is_subset(c)),
        (TextSet(r), Text(c)) => (
            VerdictRule::SetMembership,
            r.iter().all(|item| item == c),
        ),
        (Integer(r), Integer(c)) => (
            if ordinal {
                VerdictRule::OrdinalLeq
            } else {
                VerdictRule::NumericLeq
            },
            r <= c,
        ),
        (Real(r), Real(c)) => (VerdictRule::NumericLeq, r <= c),
        (Integer(r), Real(c)) => (VerdictRule::NumericLeq, (*r as f64) <= *c),
        (Real(r), Integer(c)) => (VerdictRule::NumericLeq, *r <= *c as f64),
        (Duration(r), Duration(c)) => (VerdictRule::NumericLeq, r <= c),
        (DataSize(r), DataSize(c)) => (VerdictRule::NumericLeq, r <= c),
        (Integer(r), Interval(c)) => (VerdictRule::IntervalContainment, c.contains(*r as f64)),
        (Real(r), Interval(c)) => (VerdictRule::IntervalContainment, c.contains(*r)),
        (Interval(r), Interval(c)) => (VerdictRule::IntervalContainment, c.contains_interval(r)),
        (Interval(r), Integer(c)) => (VerdictRule::NumericLeq, r.upper() <= *c as f64),
        (Interval(r), Real(c)) => (VerdictRule::NumericLeq, r.upper() <= *c),
        _ => return Err(type_error()),
    };

    let message = verdict_message(rule, pass, req_value, cap_value);
    Ok(LeafVerdict {
        path: path.clone(),
        requirement: req_value.clone(),
        capability: Some(cap_value.clone()),
        rule,
        pass,
        message,
    })
}

fn verdict_message(
    rule: VerdictRule,
    pass: bool,
    req: &LeafValue,
    cap: &LeafValue,
) -> String {
    let req = req.to_literal_text();
    let cap = cap.to_literal_text();
    match (rule, pass) {
        (VerdictRule::Equality, true) => format!("requirement {req} equals capability {cap}"),
        (VerdictRule::Equality, false) => {
            format!("requirement {req} differs from capability {cap}")
        }
        (VerdictRule::NumericLeq, true) => format!("requirement {req} <= capability {cap}"),
        (VerdictRule::NumericLeq, false) => {
            format!("requirement {req} exceeds capability {cap}")
        }
        (VerdictRule::OrdinalLeq, true) => {
            format!("requirement level {req} <= capability level {cap}")
        }
        (VerdictRule::OrdinalLeq, false) => {
            format!("requirement level {req} exceeds capability level {cap}")
        }
        (VerdictRule::IntervalContainment, true) => {
            format!("requirement {req} within capability {cap}")
        }
        (VerdictRule::IntervalContainment, false) => {
            format!("requirement {req} outside capability {cap}")
        }
        (VerdictRule::SetMembership, true) => {
            format!("requirement {req} covered by capability {cap}")
        }
        (VerdictRule::SetMembership, false) => {
            format!("requirement {req} not covered by capability {cap}")
        }
        (VerdictRule::MissingInCapability, _) => {
            "assigned in requirement but absent from capability".to_string()
        }
    }
}

fn missing_verdict(path: &NodePath, req_value: &LeafValue) -> LeafVerdict {
    LeafVerdict {
        path: path.clone(),
        requirement: req_value.clone(),
        capability: None,
        rule: VerdictRule::MissingInCapability,
        pass: false,
        message: verdict_message(
            VerdictRule::MissingInCapability,
            false,
            req_value,
            req_value,
        ),
    }
}

/// Decides whether `req` lies within `cap` under taxonomy `tax`.
///
/// The capability is concretized against the requirement first. Every
/// requirement-assigned path produces one verdict, in taxonomy
/// declaration order; `within` is their conjunction.
pub fn generic_compare(
    cap: &OddDocument,
    req: &OddDocument,
    tax: &Taxonomy,
) -> Result<ComparisonVerdict, CompareError> {
    let concretization = concretize_capability(cap, req, tax)?;
    let concrete_cap = &concretization.capability;

    let mut leaf_verdicts = Vec::with_capacity(req.assignments().len());
    let mut visited = 0usize;
    for path in tax.leaf_paths() {
        let req_value = match req.assignments().get(&path) {
            Some(value) => value,
            None => continue,
        };
        visited += 1;
        let verdict = match concrete_cap.assignments().get(&path) {
            Some(cap_value) => {
                let leaf_type = tax.leaf_type(&path).expect("leaf_paths yields leaves");
                compare_leaf(&path, req_value, cap_value, leaf_type)?
            }
            None => missing_verdict(&path, req_value),
        };
        leaf_verdicts.push(verdict);
    }

    if visited != req.assignments().len() {
        let stray = req
            .assignments()
            .keys()
            .find(|p| tax.leaf_type(p).is_none())
            .expect("count mismatch implies a stray path");
        return Err(CompareError::UnknownPath {
            path: stray.clone(),
            taxonomy: tax.id().to_string(),
        });
    }

    let within = leaf_verdicts.iter().all(|v| v.pass);
    Ok(ComparisonVerdict {
        within,
        leaf_verdicts,
        trace: concretization.trace,
    })
}

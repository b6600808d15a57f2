//! Document validation against a taxonomy.
//!
//! Violations are returned as data, never raised: an empty list means the
//! document is valid. The check is deterministic and independent of
//! assignment insertion order.

use std::fmt;

use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::Taxonomy;
use crate::model::value::{LeafValue, RangeConstraint};
use crate::path::NodePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationCode {
    /// The document references a taxonomy this one neither is nor extends.
    TaxonomyMismatch,
    /// Assignment path absent from the taxonomy.
    UnknownPath,
    /// Assignment path names a branch, not a leaf.
    NotALeaf,
    /// Value variant incompatible with the declared leaf kind.
    TypeMismatch,
    /// Expression value in a requirement-role document.
    ExpressionInRequirement,
    /// Real-valued content is NaN or infinite.
    NonFiniteNumber,
    /// Value outside the leaf's declared range.
    ConstraintViolation,
    /// Required leaf not assigned.
    MissingRequired,
}

impl ViolationCode {
    pub fn name(&self) -> &'static str {
        match self {
            ViolationCode::TaxonomyMismatch => "taxonomy-mismatch",
            ViolationCode::UnknownPath => "unknown-path",
            ViolationCode::NotALeaf => "not-a-leaf",
            ViolationCode::TypeMismatch => "type-mismatch",
            ViolationCode::ExpressionInRequirement => "expression-in-requirement",
            ViolationCode::NonFiniteNumber => "non-finite-number",
            ViolationCode::ConstraintViolation => "constraint-violation",
            ViolationCode::MissingRequired => "missing-required",
        }
    }
}

/// One validation finding. `path` is `None` for document-level findings.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: Option<NodePath>,
    pub code: ViolationCode,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.path {
            Some(path) => write!(f, "{}: {} [{}]", path, self.message, self.code.name()),
            None => write!(f, "{} [{}]", self.message, self.code.name()),
        }
    }
}

fn violation(path: &NodePath, code: ViolationCode, message: String) -> Violation {
    Violation {
        path: Some(path.clone()),
        code,
        message,
    }
}

/// Validates `doc` against `tax`. Empty result iff every assignment path
/// resolves to a leaf of compatible type, every range constraint holds,
/// every required leaf is assigned, and role rules hold (a requirement
/// contains no expressions).
pub fn validate_document(doc: &OddDocument, tax: &Taxonomy) -> Vec<Violation> {
    let mut violations = Vec::new();

    if !tax.covers(doc.taxonomy_id()) {
        violations.push(Violation {
            path: None,
            code: ViolationCode::TaxonomyMismatch,
            message: format!(
                "document references taxonomy {:?} which {:?} does not cover",
                doc.taxonomy_id(),
                tax.id()
            ),
        });
    }

    for (path, value) in doc.assignments() {
        let node = match tax.find(path) {
            Some(node) => node,
            None => {
                violations.push(violation(
                    path,
                    ViolationCode::UnknownPath,
                    "path does not exist in the taxonomy".to_string(),
                ));
                continue;
            }
        };
        let leaf_type = match node.leaf_type() {
            Some(leaf_type) => leaf_type,
            None => {
                violations.push(violation(
                    path,
                    ViolationCode::NotALeaf,
                    "path names a branch, only leaves take values".to_string(),
                ));
                continue;
            }
        };

        if let LeafValue::Expression(_) = value {
            if doc.role() == Role::Requirement {
                violations.push(violation(
                    path,
                    ViolationCode::ExpressionInRequirement,
                    "requirement documents must hold concrete values".to_string(),
                ));
            }
            // constraint checks are deferred to concretization
            continue;
        }

        if !value.is_compatible_with(leaf_type.kind()) {
            violations.push(violation(
                path,
                ViolationCode::TypeMismatch,
                format!(
                    "value of kind {} is not compatible with {} leaf",
                    value.kind_label(),
                    leaf_type.kind()
                ),
            ));
            continue;
        }

        if let Some(bad) = non_finite(value) {
            violations.push(violation(
                path,
                ViolationCode::NonFiniteNumber,
                format!("{bad} content must be finite"),
            ));
            continue;
        }

        if let Some(constraint) = leaf_type.constraint() {
            if let Some(message) = constraint_breach(value, constraint) {
                violations.push(violation(path, ViolationCode::ConstraintViolation, message));
            }
        }
    }

    for path in tax.required_leaf_paths() {
        if !doc.assignments().contains_key(&path) {
            violations.push(violation(
                &path,
                ViolationCode::MissingRequired,
                "required leaf is not assigned".to_string(),
            ));
        }
    }

    violations
}

fn non_finite(value: &LeafValue) -> Option<&'static str> {
    match value {
        LeafValue::Real(v) | LeafValue::Duration(v) if !v.is_finite() => Some("numeric"),
        _ => None,
    }
}

fn constraint_breach(value: &LeafValue, constraint: &RangeConstraint) -> Option<String> {
    let describe = |shown: &str| {
        format!(
            "value {shown} outside declared range {:?}..{:?}",
            constraint.lower(),
            constraint.upper()
        )
    };
    match value {
        LeafValue::Integer(v) => {
            (!constraint.contains(*v as f64)).then(|| describe(&v.to_string()))
        }
        LeafValue::Real(v) | LeafValue::Duration(v) => {
            (!constraint.contains(*v)).then(|| describe(&format!("{v:?}")))
        }
        LeafValue::DataSize(v) => {
            (!constraint.contains(*v as f64)).then(|| describe(&v.to_string()))
        }
        LeafValue::Interval(iv) => {
            (!(constraint.contains(iv.lower()) && constraint.contains(iv.upper())))
                .then(|| describe(&iv.to_string()))
        }
        _ => None,
    }
}

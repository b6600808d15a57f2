//! Capability concretization: binding a requirement document to a
//! capability and reducing every expression-valued leaf to a concrete
//! value.
//!
//! Evaluation is total per leaf and independent across leaves: an
//! expression may reference only the requirement, never another
//! capability leaf, so no evaluation order is observable. All
//! subexpressions are evaluated (no short-circuiting), which keeps the
//! result identical to full evaluation and surfaces type errors and
//! unbound references wherever they occur.

use thiserror::Error;

use crate::expr::{CapabilityExpression, CompareOp};
use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::Taxonomy;
use crate::model::validate::{validate_document, Violation};
use crate::model::value::{canon_real, LeafKind, LeafValue};
use crate::path::NodePath;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("requirement does not assign {path}")]
    UnboundReference { path: NodePath },
    #[error("{0}")]
    TypeError(String),
}

/// The requirement a capability is being concretized against.
#[derive(Debug, Clone, Copy)]
pub struct EvaluationContext<'a> {
    pub requirement: &'a OddDocument,
}

/// One explainability record: which leaf held an expression, its source
/// text, and the value it resolved to.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub path: NodePath,
    pub expression: String,
    pub value: LeafValue,
}

/// A concretized capability plus the evaluation trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Concretization {
    pub capability: OddDocument,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConcretizeError {
    #[error("document {id:?} has role {found}, expected {expected}")]
    RoleMismatch {
        id: String,
        expected: Role,
        found: Role,
    },
    #[error("evaluating {path}: {source}")]
    Evaluation {
        path: NodePath,
        source: EvalError,
    },
    #[error("concretized capability fails validation: {}", summarize(.violations))]
    InvalidResult { violations: Vec<Violation> },
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Evaluates an expression against the requirement. Returns a concrete
/// (non-expression) value.
pub fn evaluate_expression(
    expr: &CapabilityExpression,
    ctx: &EvaluationContext<'_>,
) -> Result<LeafValue, EvalError> {
    match expr {
        CapabilityExpression::Literal(value) => Ok(value.clone()),
        CapabilityExpression::ReqRef(path) => {
            match ctx.requirement.assignments().get(path) {
                None => Err(EvalError::UnboundReference { path: path.clone() }),
                Some(LeafValue::Expression(_)) => Err(EvalError::TypeError(format!(
                    "requirement leaf {path} holds an expression"
                ))),
                Some(value) => Ok(value.clone()),
            }
        }
        CapabilityExpression::Compare { op, left, right } => {
            let left = evaluate_expression(left, ctx)?;
            let right = evaluate_expression(right, ctx)?;
            compare_values(*op, &left, &right).map(LeafValue::Boolean)
        }
        CapabilityExpression::And(items) => {
            let mut result = true;
            for item in items {
                result &= expect_boolean(evaluate_expression(item, ctx)?, "and")?;
            }
            Ok(LeafValue::Boolean(result))
        }
        CapabilityExpression::Or(items) => {
            let mut result = false;
            for item in items {
                result |= expect_boolean(evaluate_expression(item, ctx)?, "or")?;
            }
            Ok(LeafValue::Boolean(result))
        }
        CapabilityExpression::Not(inner) => {
            let value = expect_boolean(evaluate_expression(inner, ctx)?, "not")?;
            Ok(LeafValue::Boolean(!value))
        }
        CapabilityExpression::IfThenElse {
            condition,
            then_branch,
            else_branch,
        } => {
            let condition = expect_boolean(evaluate_expression(condition, ctx)?, "if")?;
            let then_value = evaluate_expression(then_branch, ctx)?;
            let else_value = evaluate_expression(else_branch, ctx)?;
            Ok(if condition { then_value } else { else_value })
        }
    }
}

fn expect_boolean(value: LeafValue, operator: &str) -> Result<bool, EvalError> {
    match value {
        LeafValue::Boolean(b) => Ok(b),
        other => Err(EvalError::TypeError(format!(
            "`{operator}` needs boolean operands, got {}",
            other.kind_label()
        ))),
    }
}

/// Comparison semantics inside expressions: exact binary comparison of
/// 64-bit reals, integers promoted where mixed; text and boolean admit
/// only `==` and `!=`.
fn compare_values(op: CompareOp, left: &LeafValue, right: &LeafValue) -> Result<bool, EvalError> {
    use LeafValue::*;
    let ordering = match (left, right) {
        (Integer(a), Integer(b)) => a.partial_cmp(b),
        (Real(a), Real(b)) => a.partial_cmp(b),
        (Integer(a), Real(b)) => (*a as f64).partial_cmp(b),
        (Real(a), Integer(b)) => a.partial_cmp(&(*b as f64)),
        (Duration(a), Duration(b)) => a.partial_cmp(b),
        (DataSize(a), DataSize(b)) => a.partial_cmp(b),
        (Text(a), Text(b)) if op.is_equality() => {
            return Ok(apply_equality(op, a == b));
        }
        (Boolean(a), Boolean(b)) if op.is_equality() => {
            return Ok(apply_equality(op, a == b));
        }
        (a, b) => {
            return Err(EvalError::TypeError(format!(
                "cannot compare {} {} {}",
                a.kind_label(),
                op.symbol(),
                b.kind_label()
            )))
        }
    };
    let ordering = ordering.ok_or_else(|| {
        EvalError::TypeError("comparison with a non-finite number".to_string())
    })?;
    Ok(match op {
        CompareOp::Lt => ordering.is_lt(),
        CompareOp::Le => ordering.is_le(),
        CompareOp::Gt => ordering.is_gt(),
        CompareOp::Ge => ordering.is_ge(),
        CompareOp::Eq => ordering.is_eq(),
        CompareOp::Ne => ordering.is_ne(),
    })
}

fn apply_equality(op: CompareOp, equal: bool) -> bool {
    match op {
        CompareOp::Eq => equal,
        CompareOp::Ne => !equal,
        _ => unreachable!("guarded by is_equality"),
    }
}

/// Replaces every expression leaf of `cap` with its value under `req`.
/// Non-expression leaves are untouched; the result contains no
/// expressions and passes validation against `tax` (so an evaluated
/// attribute outside 1..3 fails here rather than leaking downstream).
pub fn concretize_capability(
    cap: &OddDocument,
    req: &OddDocument,
    tax: &Taxonomy,
) -> Result<Concretization, ConcretizeError> {
    if cap.role() != Role::Capability {
        return Err(ConcretizeError::RoleMismatch {
            id: cap.id().to_string(),
            expected: Role::Capability,
            found: cap.role(),
        });
    }
    if req.role() != Role::Requirement {
        return Err(ConcretizeError::RoleMismatch {
            id: req.id().to_string(),
            expected: Role::Requirement,
            found: req.role(),
        });
    }

    let ctx = EvaluationContext { requirement: req };
    let mut result = cap.clone();
    let mut trace = Vec::new();
    for (path, value) in cap.assignments() {
        let expr = match value {
            LeafValue::Expression(expr) => expr,
            _ => continue,
        };
        let evaluated = evaluate_expression(expr, &ctx).map_err(|source| {
            ConcretizeError::Evaluation {
                path: path.clone(),
                source,
            }
        })?;
        let coerced = coerce_to_leaf(evaluated, path, tax).map_err(|source| {
            ConcretizeError::Evaluation {
                path: path.clone(),
                source,
            }
        })?;
        trace.push(TraceEntry {
            path: path.clone(),
            expression: expr.print(),
            value: coerced.clone(),
        });
        result.assign(path.clone(), coerced);
    }

    let violations = validate_document(&result, tax);
    if !violations.is_empty() {
        return Err(ConcretizeError::InvalidResult { violations });
    }
    Ok(Concretization {
        capability: result,
        trace,
    })
}

/// An evaluated integer feeding a real-typed leaf is promoted; any other
/// mismatch with the declared kind is a type error.
fn coerce_to_leaf(
    value: LeafValue,
    path: &NodePath,
    tax: &Taxonomy,
) -> Result<LeafValue, EvalError> {
    let kind = match tax.leaf_type(path) {
        Some(leaf_type) => leaf_type.kind(),
        None => return Ok(value), // validation reports the unknown path
    };
    match (&value, kind) {
        (LeafValue::Integer(i), LeafKind::Real) => Ok(LeafValue::Real(canon_real(*i as f64))),
        _ if value.is_compatible_with(kind) => Ok(value),
        _ => Err(EvalError::TypeError(format!(
            "expression produced {} for {} leaf",
            value.kind_label(),
            kind
        ))),
    }
}

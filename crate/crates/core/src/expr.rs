//! Expression AST for conditional capability values.
//!
//! A capability leaf may carry an expression instead of a concrete value;
//! the expression is evaluated against the bound requirement document when
//! the capability is concretized. Expressions reference only the
//! requirement (`req:<path>`), never another capability leaf, so
//! evaluation cannot recurse.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::value::LeafValue;
use crate::path::NodePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CompareOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
            CompareOp::Eq => "==",
            CompareOp::Ne => "!=",
        }
    }

    /// Equality-class operators apply to text and boolean operands;
    /// the ordering operators are numeric-only.
    pub fn is_equality(&self) -> bool {
        matches!(self, CompareOp::Eq | CompareOp::Ne)
    }
}

/// AST of the conditional mini-language embedded in capability documents.
///
/// Precedence, loosest first: `if/then/else`, `or`, `and`, `not`,
/// comparison, primary. Comparison does not chain.
#[derive(Debug, Clone, PartialEq)]
pub enum CapabilityExpression {
    /// A concrete literal. Never wraps [`LeafValue::Expression`].
    Literal(LeafValue),
    /// Reference into the bound requirement document.
    ReqRef(NodePath),
    Compare {
        op: CompareOp,
        left: Box<CapabilityExpression>,
        right: Box<CapabilityExpression>,
    },
    And(Vec<CapabilityExpression>),
    Or(Vec<CapabilityExpression>),
    Not(Box<CapabilityExpression>),
    IfThenElse {
        condition: Box<CapabilityExpression>,
        then_branch: Box<CapabilityExpression>,
        else_branch: Box<CapabilityExpression>,
    },
}

// Precedence levels used by the printer; must mirror the parser.
const PREC_IF: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_COMPARE: u8 = 4;
const PREC_PRIMARY: u8 = 5;

impl CapabilityExpression {
    fn precedence(&self) -> u8 {
        match self {
            CapabilityExpression::IfThenElse { .. } => PREC_IF,
            CapabilityExpression::Or(_) => PREC_OR,
            CapabilityExpression::And(_) => PREC_AND,
            CapabilityExpression::Not(_) => PREC_NOT,
            CapabilityExpression::Compare { .. } => PREC_COMPARE,
            CapabilityExpression::Literal(_) | CapabilityExpression::ReqRef(_) => PREC_PRIMARY,
        }
    }

    /// Canonical source text. Parsing the result yields a structurally
    /// equal AST.
    pub fn print(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, PREC_IF);
        out
    }

    fn write(&self, out: &mut String, min_prec: u8) {
        let own = self.precedence();
        if own < min_prec {
            out.push('(');
            self.write(out, PREC_IF);
            out.push(')');
            return;
        }
        match self {
            CapabilityExpression::Literal(value) => out.push_str(&value.to_literal_text()),
            CapabilityExpression::ReqRef(path) => {
                out.push_str("req:");
                out.push_str(path.as_str());
            }
            CapabilityExpression::Compare { op, left, right } => {
                left.write(out, PREC_PRIMARY);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                right.write(out, PREC_PRIMARY);
            }
            CapabilityExpression::And(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" and ");
                    }
                    item.write(out, PREC_NOT);
                }
            }
            CapabilityExpression::Or(items) => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" or ");
                    }
                    item.write(out, PREC_AND);
                }
            }
            CapabilityExpression::Not(inner) => {
                out.push_str("not ");
                inner.write(out, PREC_NOT);
            }
            CapabilityExpression::IfThenElse {
                condition,
                then_branch,
                else_branch,
            } => {
                out.push_str("if ");
                condition.write(out, PREC_OR);
                out.push_str(" then ");
                then_branch.write(out, PREC_OR);
                out.push_str(" else ");
                else_branch.write(out, PREC_IF);
            }
        }
    }

    /// All requirement paths referenced anywhere in the expression.
    pub fn referenced_paths(&self) -> BTreeSet<&NodePath> {
        let mut paths = BTreeSet::new();
        self.collect_paths(&mut paths);
        paths
    }

    fn collect_paths<'a>(&'a self, into: &mut BTreeSet<&'a NodePath>) {
        match self {
            CapabilityExpression::Literal(_) => {}
            CapabilityExpression::ReqRef(path) => {
                into.insert(path);
            }
            CapabilityExpression::Compare { left, right, .. } => {
                left.collect_paths(into);
                right.collect_paths(into);
            }
            CapabilityExpression::And(items) | CapabilityExpression::Or(items) => {
                for item in items {
                    item.collect_paths(into);
                }
            }
            CapabilityExpression::Not(inner) => inner.collect_paths(into),
            CapabilityExpression::IfThenElse {
                condition,
                then_branch,
                else_branch,
            } => {
                condition.collect_paths(into);
                then_branch.collect_paths(into);
                else_branch.collect_paths(into);
            }
        }
    }
}

impl fmt::Display for CapabilityExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

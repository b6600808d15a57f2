//! Reads documents back from canonical YAML or JSON text.
//!
//! Values are typed by the referenced taxonomy: an array on a text leaf
//! is a text set, an array on a numeric leaf is an interval, strings on
//! duration and data-size leaves carry the literal suffix forms, and
//! `{expr: "<source>"}` holds an expression.

use thiserror::Error;

use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::{Taxonomy, TaxonomyRegistry};
use crate::model::validate::{validate_document, Violation};
use crate::model::value::{canon_real, Interval, LeafKind, LeafValue};
use crate::parse::expression::parse_expression;
use crate::parse::lexer::{tokenize, Token};
use crate::path::NodePath;

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("not well-formed {format}: {detail}")]
    Syntax { format: &'static str, detail: String },
    #[error("unexpected document layout: {0}")]
    Layout(String),
    #[error("unknown taxonomy {0:?}")]
    UnknownTaxonomy(String),
    #[error("assignment path {0:?} is not a leaf of the taxonomy")]
    UnknownPath(String),
    #[error("value at {path}: {detail}")]
    Value { path: String, detail: String },
    #[error("document fails validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Minimal common shape of parsed YAML and JSON.
enum Raw {
    Bool(bool),
    Int(i64),
    Real(f64),
    Str(String),
    Seq(Vec<Raw>),
    Map(Vec<(String, Raw)>),
}

fn from_json(value: serde_json::Value) -> Result<Raw, ImportError> {
    Ok(match value {
        serde_json::Value::Bool(b) => Raw::Bool(b),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Raw::Int(i)
            } else if let Some(f) = n.as_f64() {
                Raw::Real(f)
            } else {
                return Err(ImportError::Layout(format!("unsupported number {n}")));
            }
        }
        serde_json::Value::String(s) => Raw::Str(s),
        serde_json::Value::Array(items) => Raw::Seq(
            items
                .into_iter()
                .map(from_json)
                .collect::<Result<_, _>>()?,
        ),
        serde_json::Value::Object(map) => {
            let mut entries = Vec::with_capacity(map.len());
            for (key, value) in map {
                entries.push((key, from_json(value)?));
            }
            Raw::Map(entries)
        }
        serde_json::Value::Null => {
            return Err(ImportError::Layout("null has no meaning here".to_string()))
        }
    })
}

fn from_yaml(value: serde_yaml::Value) -> Result<Raw, ImportError> {
    Ok(match value {
        serde_yaml::Value::Bool(b) => Raw::Bool(b),
        serde_yaml::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Raw::Int(i)
            } else if let Some(f) = n.as_f64() {
                Raw::Real(f)
            } else {
                return Err(ImportError::Layout(format!("unsupported number {n:?}")));
            }
        }
        serde_yaml::Value::String(s) => Raw::Str(s),
        serde_yaml::Value::Sequence(items) => Raw::Seq(
            items
                .into_iter()
                .map(from_yaml)
                .collect::<Result<_, _>>()?,
        ),
        serde_yaml::Value::Mapping(map) => {
            let mut entries = Vec::with_capacity(map.len());
            for (key, value) in map {
                let key = match key {
                    serde_yaml::Value::String(s) => s,
                    other => {
                        return Err(ImportError::Layout(format!(
                            "map keys must be strings, found {other:?}"
                        )))
                    }
                };
                entries.push((key, from_yaml(value)?));
            }
            Raw::Map(entries)
        }
        other => {
            return Err(ImportError::Layout(format!(
                "unsupported YAML node {other:?}"
            )))
        }
    })
}

/// Parses canonical YAML document text.
pub fn document_from_yaml(
    text: &str,
    registry: &TaxonomyRegistry,
) -> Result<OddDocument, ImportError> {
    let value: serde_yaml::Value =
        serde_yaml::from_str(text).map_err(|e| ImportError::Syntax {
            format: "YAML",
            detail: e.to_string(),
        })?;
    build_document(from_yaml(value)?, registry)
}

/// Parses canonical JSON document text.
pub fn document_from_json(
    text: &str,
    registry: &TaxonomyRegistry,
) -> Result<OddDocument, ImportError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ImportError::Syntax {
            format: "JSON",
            detail: e.to_string(),
        })?;
    build_document(from_json(value)?, registry)
}

fn build_document(raw: Raw, registry: &TaxonomyRegistry) -> Result<OddDocument, ImportError> {
    let entries = match raw {
        Raw::Map(entries) => entries,
        _ => return Err(ImportError::Layout("expected a top-level map".to_string())),
    };
    let mut id = None;
    let mut role = None;
    let mut taxonomy_id = None;
    let mut assignments = None;
    for (key, value) in entries {
        match (key.as_str(), value) {
            ("id", Raw::Str(s)) => id = Some(s),
            ("role", Raw::Str(s)) => role = Some(s),
            ("taxonomy", Raw::Str(s)) => taxonomy_id = Some(s),
            ("assignments", Raw::Map(map)) => assignments = Some(map),
            (key, _) => {
                return Err(ImportError::Layout(format!(
                    "unexpected or mistyped field {key:?}"
                )))
            }
        }
    }
    let id = id.ok_or_else(|| ImportError::Layout("missing field `id`".to_string()))?;
    let role_name =
        role.ok_or_else(|| ImportError::Layout("missing field `role`".to_string()))?;
    let role = Role::from_name(&role_name)
        .ok_or_else(|| ImportError::Layout(format!("unknown role {role_name:?}")))?;
    let taxonomy_id =
        taxonomy_id.ok_or_else(|| ImportError::Layout("missing field `taxonomy`".to_string()))?;
    let assignments =
        assignments.ok_or_else(|| ImportError::Layout("missing field `assignments`".to_string()))?;
    let taxonomy = registry
        .get(&taxonomy_id)
        .ok_or_else(|| ImportError::UnknownTaxonomy(taxonomy_id.clone()))?;

    let mut document = OddDocument::new(&id, role, &taxonomy_id)
        .map_err(|e| ImportError::Layout(e.to_string()))?;
    for (path_text, raw_value) in assignments {
        let path = NodePath::parse(&path_text)
            .map_err(|_| ImportError::UnknownPath(path_text.clone()))?;
        let value = convert_value(raw_value, &path, taxonomy)?;
        document.assign(path, value);
    }

    let violations = validate_document(&document, taxonomy);
    if !violations.is_empty() {
        return Err(ImportError::Invalid(violations));
    }
    Ok(document)
}

fn convert_value(
    raw: Raw,
    path: &NodePath,
    taxonomy: &Taxonomy,
) -> Result<LeafValue, ImportError> {
    let kind = taxonomy
        .leaf_type(path)
        .map(|t| t.kind())
        .ok_or_else(|| ImportError::UnknownPath(path.as_str().to_string()))?;
    let err = |detail: String| ImportError::Value {
        path: path.as_str().to_string(),
        detail,
    };

    // {expr: "..."} is an expression on any leaf kind
    if let Raw::Map(entries) = &raw {
        if let [(key, Raw::Str(source))] = entries.as_slice() {
            if key == "expr" {
                let expr = parse_expression(source)
                    .map_err(|d| err(format!("expression does not parse: {d}")))?;
                return Ok(LeafValue::expression(expr));
            }
        }
        return Err(err("unexpected map value".to_string()));
    }

    match (kind, raw) {
        (LeafKind::Boolean, Raw::Bool(b)) => Ok(LeafValue::Boolean(b)),
        (LeafKind::Text, Raw::Str(s)) => Ok(LeafValue::Text(s)),
        (LeafKind::Text, Raw::Seq(items)) => Ok(LeafValue::TextSet(string_set(items, &err)?)),
        (LeafKind::TextSet, Raw::Seq(items)) => Ok(LeafValue::TextSet(string_set(items, &err)?)),
        (LeafKind::Integer, Raw::Int(i)) => Ok(LeafValue::Integer(i)),
        (LeafKind::Integer, Raw::Seq(items)) => interval(items, &err),
        (LeafKind::Real, Raw::Int(i)) => Ok(LeafValue::Real(canon_real(i as f64))),
        (LeafKind::Real, Raw::Real(f)) => Ok(LeafValue::Real(canon_real(f))),
        (LeafKind::Real, Raw::Seq(items)) => interval(items, &err),
        (LeafKind::Duration, Raw::Str(s)) => suffixed_literal(&s, LeafKind::Duration, &err),
        (LeafKind::DataSize, Raw::Str(s)) => suffixed_literal(&s, LeafKind::DataSize, &err),
        (kind, _) => Err(err(format!("value does not fit a {kind} leaf"))),
    }
}

fn string_set(
    items: Vec<Raw>,
    err: &impl Fn(String) -> ImportError,
) -> Result<std::collections::BTreeSet<String>, ImportError> {
    items
        .into_iter()
        .map(|item| match item {
            Raw::Str(s) => Ok(s),
            _ => Err(err("text sets hold strings only".to_string())),
        })
        .collect()
}

fn interval(
    items: Vec<Raw>,
    err: &impl Fn(String) -> ImportError,
) -> Result<LeafValue, ImportError> {
    let bounds: Vec<f64> = items
        .into_iter()
        .map(|item| match item {
            Raw::Int(i) => Ok(i as f64),
            Raw::Real(f) => Ok(f),
            _ => Err(err("interval bounds must be numbers".to_string())),
        })
        .collect::<Result<_, _>>()?;
    if bounds.len() != 2 {
        return Err(err("an interval has exactly two bounds".to_string()));
    }
    let interval = Interval::new(bounds[0], bounds[1]).map_err(|e| err(e.to_string()))?;
    Ok(LeafValue::Interval(interval))
}

/// Reuses the grammar's literal lexer for `"90.0s"` / `"1024b"` forms.
fn suffixed_literal(
    text: &str,
    kind: LeafKind,
    err: &impl Fn(String) -> ImportError,
) -> Result<LeafValue, ImportError> {
    let tokens = tokenize(text).map_err(|d| err(format!("bad literal {text:?}: {d}")))?;
    match (kind, tokens.first().map(|t| &t.token)) {
        (LeafKind::Duration, Some(Token::Duration(seconds))) if tokens.len() == 2 => {
            Ok(LeafValue::Duration(*seconds))
        }
        (LeafKind::DataSize, Some(Token::Size(bytes))) if tokens.len() == 2 => {
            Ok(LeafValue::DataSize(*bytes))
        }
        _ => Err(err(format!(
            "expected a {} literal such as {:?}",
            kind,
            if kind == LeafKind::Duration { "90.0s" } else { "1024b" }
        ))),
    }
}

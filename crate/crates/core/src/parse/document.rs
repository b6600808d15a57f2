//! Parser for requirement and capability document files.

use std::collections::BTreeMap;

use crate::expr::CapabilityExpression;
use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::{Taxonomy, TaxonomyRegistry};
use crate::model::validate::validate_document;
use crate::model::value::{LeafKind, LeafValue};
use crate::parse::cursor::Cursor;
use crate::parse::diagnostics::{Diagnostics, ParseDiagnostic};
use crate::parse::expression::parse_expr;
use crate::parse::lexer::{tokenize, Token};
use crate::path::NodePath;

/// A parsed document plus the source location of each assignment, used to
/// report validation findings with file positions.
#[derive(Debug, Clone)]
pub struct ParsedDocument {
    pub document: OddDocument,
    pub locations: BTreeMap<NodePath, (u32, u32)>,
    /// Location of the `document` keyword, for document-level findings.
    pub header: (u32, u32),
}

/// Parses and validates a document. The returned document passes
/// [`validate_document`] against its referenced taxonomy.
pub fn parse_document(
    source: &str,
    registry: &TaxonomyRegistry,
    default_id: Option<&str>,
) -> Result<OddDocument, Diagnostics> {
    let parsed = parse_document_unvalidated(source, registry, default_id)?;
    let taxonomy = registry
        .get(parsed.document.taxonomy_id())
        .expect("taxonomy presence checked during parse");
    let violations = validate_document(&parsed.document, taxonomy);
    if violations.is_empty() {
        Ok(parsed.document)
    } else {
        Err(parsed.diagnostics_for(&violations))
    }
}

impl ParsedDocument {
    /// Maps validation findings onto source locations.
    pub fn diagnostics_for(
        &self,
        violations: &[crate::model::validate::Violation],
    ) -> Diagnostics {
        let list = violations
            .iter()
            .map(|v| {
                let (line, column) = v
                    .path
                    .as_ref()
                    .and_then(|p| self.locations.get(p).copied())
                    .unwrap_or(self.header);
                ParseDiagnostic::error(line, column, v.to_string())
            })
            .collect();
        Diagnostics(list)
    }
}

/// Parses a document without running semantic validation. Syntax errors,
/// an unknown taxonomy reference, and duplicate assignments still fail.
pub fn parse_document_unvalidated(
    source: &str,
    registry: &TaxonomyRegistry,
    default_id: Option<&str>,
) -> Result<ParsedDocument, Diagnostics> {
    let mut cursor = Cursor::new(tokenize(source)?);
    let header_token = cursor.peek().clone();
    if !cursor.eat_keyword("document") {
        return Err(cursor.error_here(format!(
            "expected `document`, found {}",
            cursor.peek().token.describe()
        )));
    }
    let header = (header_token.line, header_token.column);

    let explicit_id = match cursor.peek().token.clone() {
        Token::Ident(name) => {
            cursor.advance();
            Some(name)
        }
        _ => None,
    };
    let id = match explicit_id.or_else(|| default_id.map(str::to_string)) {
        Some(id) => id,
        None => {
            return Err(cursor.error_here(
                "document has no name and no default id is available",
            ))
        }
    };
    cursor.expect(Token::LBrace, "`{`")?;

    let mut role: Option<Role> = None;
    let mut taxonomy_id: Option<String> = None;
    let mut assignments: Vec<(NodePath, CapabilityExpression, (u32, u32))> = Vec::new();
    let mut locations: BTreeMap<NodePath, (u32, u32)> = BTreeMap::new();

    loop {
        if cursor.eat(&Token::RBrace) {
            break;
        }
        if cursor.at_keyword("role") {
            cursor.advance();
            if role.is_some() {
                return Err(cursor.error_here("duplicate `role` header"));
            }
            let (name, line, column) = cursor.expect_ident("`requirement` or `capability`")?;
            role = Some(Role::from_name(&name).ok_or_else(|| {
                Diagnostics::one(ParseDiagnostic::error(
                    line,
                    column,
                    format!("unknown role `{name}` (expected requirement or capability)"),
                ))
            })?);
        } else if cursor.at_keyword("taxonomy") {
            cursor.advance();
            if taxonomy_id.is_some() {
                return Err(cursor.error_here("duplicate `taxonomy` header"));
            }
            let (name, _, _) = cursor.expect_ident("taxonomy id")?;
            taxonomy_id = Some(name);
        } else if cursor.at_keyword("assign") {
            cursor.advance();
            let (path, line, column) = parse_path(&mut cursor)?;
            if locations.contains_key(&path) {
                return Err(Diagnostics::one(ParseDiagnostic::error(
                    line,
                    column,
                    format!("path {path} is assigned twice"),
                )));
            }
            cursor.expect(Token::Assign, "`=`")?;
            let expr = parse_expr(&mut cursor)?;
            locations.insert(path.clone(), (line, column));
            assignments.push((path, expr, (line, column)));
        } else {
            return Err(cursor.error_here(format!(
                "expected `role`, `taxonomy`, `assign`, or `}}`, found {}",
                cursor.peek().token.describe()
            )));
        }
    }
    cursor.expect_eof()?;

    let role = role.ok_or_else(|| {
        Diagnostics::one(ParseDiagnostic::error(
            header.0,
            header.1,
            "document is missing a `role` header",
        ))
    })?;
    let taxonomy_id = taxonomy_id.ok_or_else(|| {
        Diagnostics::one(ParseDiagnostic::error(
            header.0,
            header.1,
            "document is missing a `taxonomy` header",
        ))
    })?;
    let taxonomy = registry.get(&taxonomy_id).ok_or_else(|| {
        Diagnostics::one(ParseDiagnostic::error(
            header.0,
            header.1,
            format!("unknown taxonomy {taxonomy_id:?}"),
        ))
    })?;

    let mut document = OddDocument::new(&id, role, &taxonomy_id).map_err(|e| {
        Diagnostics::one(ParseDiagnostic::error(header.0, header.1, e.to_string()))
    })?;
    for (path, expr, _location) in assignments {
        let value = bind_expression(expr, &path, taxonomy);
        document.assign(path, value);
    }

    Ok(ParsedDocument {
        document,
        locations,
        header,
    })
}

/// Converts a parsed expression into the stored leaf value. A bare
/// literal is stored directly, with integer literals promoted to reals
/// when the leaf is real-typed; anything else stays an expression.
fn bind_expression(
    expr: CapabilityExpression,
    path: &NodePath,
    taxonomy: &Taxonomy,
) -> LeafValue {
    match expr {
        CapabilityExpression::Literal(value) => {
            match (taxonomy.leaf_type(path).map(|t| t.kind()), &value) {
                (Some(LeafKind::Real), LeafValue::Integer(i)) => LeafValue::real(*i as f64),
                _ => value,
            }
        }
        other => LeafValue::expression(other),
    }
}

fn parse_path(cursor: &mut Cursor) -> Result<(NodePath, u32, u32), Diagnostics> {
    let (first, line, column) = cursor.expect_ident("assignment path")?;
    let mut text = first;
    while cursor.eat(&Token::Slash) {
        let (segment, _, _) = cursor.expect_ident("path segment")?;
        text.push('/');
        text.push_str(&segment);
    }
    let path = NodePath::parse(&text).map_err(|e| {
        Diagnostics::one(ParseDiagnostic::error(line, column, e.to_string()))
    })?;
    Ok((path, line, column))
}

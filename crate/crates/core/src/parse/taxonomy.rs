//! Parser for taxonomy files.
//!
//! A file holds one or more `taxonomy` declarations. A declaration with
//! `extends` merges its body into the base: branches whose names match an
//! existing base branch descend into it, everything else becomes an
//! addition at that point. Later declarations in the same file may extend
//! earlier ones.

use crate::model::taxonomy::{extend_taxonomy, Addition, Taxonomy, TaxonomyNode, TaxonomyRegistry};
use crate::model::value::{LeafKind, LeafType, RangeConstraint};
use crate::parse::cursor::Cursor;
use crate::parse::diagnostics::{Diagnostics, ParseDiagnostic};
use crate::parse::lexer::{tokenize, Token};
use crate::path::NodePath;

/// Parses every taxonomy declaration in `source`. `extends` references
/// resolve against `registry` plus declarations earlier in the file.
pub fn parse_taxonomies(
    source: &str,
    registry: &TaxonomyRegistry,
) -> Result<Vec<Taxonomy>, Diagnostics> {
    let mut cursor = Cursor::new(tokenize(source)?);
    let mut parsed: Vec<Taxonomy> = Vec::new();
    if cursor.at_eof() {
        return Err(cursor.error_here("expected a `taxonomy` declaration"));
    }
    while !cursor.at_eof() {
        let taxonomy = parse_declaration(&mut cursor, registry, &parsed)?;
        if registry.get(taxonomy.id()).is_some()
            || parsed.iter().any(|t| t.id() == taxonomy.id())
        {
            return Err(cursor.error_here(format!(
                "taxonomy {:?} is already defined",
                taxonomy.id()
            )));
        }
        parsed.push(taxonomy);
    }
    Ok(parsed)
}

/// Parses a source expected to contain exactly one taxonomy declaration.
pub fn parse_taxonomy(
    source: &str,
    registry: &TaxonomyRegistry,
) -> Result<Taxonomy, Diagnostics> {
    let mut list = parse_taxonomies(source, registry)?;
    if list.len() != 1 {
        return Err(Diagnostics::one(ParseDiagnostic::error(
            1,
            1,
            format!("expected exactly one taxonomy declaration, found {}", list.len()),
        )));
    }
    Ok(list.pop().unwrap())
}

fn parse_declaration(
    cursor: &mut Cursor,
    registry: &TaxonomyRegistry,
    parsed: &[Taxonomy],
) -> Result<Taxonomy, Diagnostics> {
    if !cursor.eat_keyword("taxonomy") {
        return Err(cursor.error_here(format!(
            "expected `taxonomy`, found {}",
            cursor.peek().token.describe()
        )));
    }
    let (id, id_line, id_column) = cursor.expect_ident("taxonomy id")?;
    let base = if cursor.eat_keyword("extends") {
        let (base_id, line, column) = cursor.expect_ident("base taxonomy id")?;
        let base = parsed
            .iter()
            .find(|t| t.id() == base_id)
            .or_else(|| registry.get(&base_id))
            .ok_or_else(|| {
                Diagnostics::one(ParseDiagnostic::error(
                    line,
                    column,
                    format!("unresolved base taxonomy {base_id:?}"),
                ))
            })?;
        Some(base.clone())
    } else {
        None
    };
    cursor.expect(Token::LBrace, "`{`")?;
    let nodes = parse_nodes(cursor)?;
    cursor.expect(Token::RBrace, "`}`")?;

    let at_decl = |message: String| {
        Diagnostics::one(ParseDiagnostic::error(id_line, id_column, message))
    };
    match base {
        None => Taxonomy::new(id, nodes).map_err(|e| at_decl(e.to_string())),
        Some(base) => {
            let mut additions = Vec::new();
            merge_into_additions(base.nodes(), nodes, None, &mut additions);
            extend_taxonomy(&base, id, &additions).map_err(|e| at_decl(e.to_string()))
        }
    }
}

/// Splits an extension body into additions: descend where a declared
/// branch matches an existing base branch, add everything else.
fn merge_into_additions(
    base_nodes: &[TaxonomyNode],
    ext_nodes: Vec<TaxonomyNode>,
    parent: Option<NodePath>,
    additions: &mut Vec<Addition>,
) {
    for node in ext_nodes {
        let base_match = base_nodes.iter().find(|b| b.name() == node.name());
        match base_match {
            Some(base_node) if !base_node.is_leaf() && !node.is_leaf() => {
                let path = match &parent {
                    Some(p) => p.join(node.name()),
                    None => NodePath::from_name(node.name()),
                };
                let children: Vec<TaxonomyNode> = node.children().to_vec();
                merge_into_additions(base_node.children(), children, Some(path), additions);
            }
            _ => additions.push(Addition {
                parent: parent.clone(),
                node,
            }),
        }
    }
}

fn parse_nodes(cursor: &mut Cursor) -> Result<Vec<TaxonomyNode>, Diagnostics> {
    let mut nodes = Vec::new();
    loop {
        if cursor.at_keyword("branch") {
            cursor.advance();
            let (name, line, column) = cursor.expect_ident("branch name")?;
            cursor.expect(Token::LBrace, "`{`")?;
            let children = parse_nodes(cursor)?;
            cursor.expect(Token::RBrace, "`}`")?;
            let node = TaxonomyNode::branch(name, children).map_err(|e| {
                Diagnostics::one(ParseDiagnostic::error(line, column, e.to_string()))
            })?;
            nodes.push(node);
        } else if cursor.at_keyword("leaf") {
            cursor.advance();
            nodes.push(parse_leaf(cursor)?);
        } else {
            return Ok(nodes);
        }
    }
}

fn parse_leaf(cursor: &mut Cursor) -> Result<TaxonomyNode, Diagnostics> {
    let (name, line, column) = cursor.expect_ident("leaf name")?;
    cursor.expect(Token::Colon, "`:`")?;
    let (kind_name, kind_line, kind_column) = cursor.expect_ident("leaf kind")?;
    let kind = LeafKind::from_name(&kind_name).ok_or_else(|| {
        Diagnostics::one(ParseDiagnostic::error(
            kind_line,
            kind_column,
            format!(
                "unknown leaf kind `{kind_name}` (expected boolean, text, integer, real, duration, data_size, or text_set)"
            ),
        ))
    })?;

    let mut unit: Option<String> = None;
    let mut constraint: Option<RangeConstraint> = None;
    let mut required = false;
    loop {
        if cursor.at_keyword("unit") {
            cursor.advance();
            if unit.is_some() {
                return Err(cursor.error_here("duplicate `unit` modifier"));
            }
            match cursor.peek().token.clone() {
                Token::Str(text) => {
                    cursor.advance();
                    unit = Some(text);
                }
                other => {
                    return Err(cursor.error_here(format!(
                        "expected unit string, found {}",
                        other.describe()
                    )))
                }
            }
        } else if cursor.at_keyword("range") {
            let range_token = cursor.advance();
            if constraint.is_some() {
                return Err(cursor.error_here("duplicate `range` modifier"));
            }
            let lower = expect_bound(cursor)?;
            cursor.expect(Token::DotDot, "`..`")?;
            let upper = expect_bound(cursor)?;
            let range = RangeConstraint::new(lower, upper).map_err(|e| {
                Diagnostics::one(ParseDiagnostic::error(
                    range_token.line,
                    range_token.column,
                    e.to_string(),
                ))
            })?;
            constraint = Some(range);
        } else if cursor.at_keyword("required") {
            cursor.advance();
            required = true;
        } else {
            break;
        }
    }

    let leaf_type = LeafType::new(kind, unit, constraint)
        .map_err(|e| Diagnostics::one(ParseDiagnostic::error(line, column, e.to_string())))?;
    TaxonomyNode::leaf(name, leaf_type, required)
        .map_err(|e| Diagnostics::one(ParseDiagnostic::error(line, column, e.to_string())))
}

fn expect_bound(cursor: &mut Cursor) -> Result<f64, Diagnostics> {
    match cursor.peek().token.clone() {
        Token::Number { text, .. } => match text.parse::<f64>() {
            Ok(f) if f.is_finite() => {
                cursor.advance();
                Ok(f)
            }
            _ => Err(cursor.error_here(format!("range bound `{text}` overflows"))),
        },
        other => Err(cursor.error_here(format!(
            "expected range bound, found {}",
            other.describe()
        ))),
    }
}

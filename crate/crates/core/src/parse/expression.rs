//! Parser for the conditional expression mini-language.
//!
//! Precedence, loosest first: `if/then/else`, `or`, `and`, `not`,
//! comparison, primary. Comparison operands are primaries; comparisons do
//! not chain. Numeric literals without a decimal point or exponent are
//! integers, all others are reals.

use crate::expr::{CapabilityExpression, CompareOp};
use crate::model::value::{Interval, LeafValue};
use crate::parse::cursor::Cursor;
use crate::parse::diagnostics::Diagnostics;
use crate::parse::lexer::{tokenize, Token};
use crate::path::NodePath;

/// Parses a standalone expression; the whole source must be consumed.
pub fn parse_expression(source: &str) -> Result<CapabilityExpression, Diagnostics> {
    let mut cursor = Cursor::new(tokenize(source)?);
    let expr = parse_expr(&mut cursor)?;
    cursor.expect_eof()?;
    Ok(expr)
}

pub(crate) fn parse_expr(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    if cursor.at_keyword("if") {
        return parse_if(cursor);
    }
    parse_or(cursor)
}

fn parse_if(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    cursor.eat_keyword("if");
    let condition = parse_expr(cursor)?;
    if !cursor.eat_keyword("then") {
        return Err(cursor.error_here(format!(
            "expected `then`, found {}",
            cursor.peek().token.describe()
        )));
    }
    let then_branch = parse_expr(cursor)?;
    if !cursor.eat_keyword("else") {
        return Err(cursor.error_here(format!(
            "expected `else` (conditionals are total), found {}",
            cursor.peek().token.describe()
        )));
    }
    let else_branch = parse_expr(cursor)?;
    Ok(CapabilityExpression::IfThenElse {
        condition: Box::new(condition),
        then_branch: Box::new(then_branch),
        else_branch: Box::new(else_branch),
    })
}

fn parse_or(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    let first = parse_and(cursor)?;
    if !cursor.at_keyword("or") {
        return Ok(first);
    }
    let mut items = vec![first];
    while cursor.eat_keyword("or") {
        items.push(parse_and(cursor)?);
    }
    Ok(CapabilityExpression::Or(items))
}

fn parse_and(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    let first = parse_not(cursor)?;
    if !cursor.at_keyword("and") {
        return Ok(first);
    }
    let mut items = vec![first];
    while cursor.eat_keyword("and") {
        items.push(parse_not(cursor)?);
    }
    Ok(CapabilityExpression::And(items))
}

fn parse_not(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    if cursor.eat_keyword("not") {
        let inner = parse_not(cursor)?;
        return Ok(CapabilityExpression::Not(Box::new(inner)));
    }
    parse_comparison(cursor)
}

fn parse_comparison(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    let left = parse_primary(cursor)?;
    let op = match cursor.peek().token {
        Token::Lt => CompareOp::Lt,
        Token::Le => CompareOp::Le,
        Token::Gt => CompareOp::Gt,
        Token::Ge => CompareOp::Ge,
        Token::EqEq => CompareOp::Eq,
        Token::Ne => CompareOp::Ne,
        _ => return Ok(left),
    };
    cursor.advance();
    let right = parse_primary(cursor)?;
    Ok(CapabilityExpression::Compare {
        op,
        left: Box::new(left),
        right: Box::new(right),
    })
}

fn parse_primary(cursor: &mut Cursor) -> Result<CapabilityExpression, Diagnostics> {
    match cursor.peek().token.clone() {
        Token::LParen => {
            cursor.advance();
            let inner = parse_expr(cursor)?;
            cursor.expect(Token::RParen, "`)`")?;
            Ok(inner)
        }
        Token::ReqRef(text) => {
            let spanned = cursor.advance();
            let path = NodePath::parse(&text).map_err(|e| {
                Diagnostics::one(crate::parse::diagnostics::ParseDiagnostic::error(
                    spanned.line,
                    spanned.column,
                    format!("malformed requirement reference: {e}"),
                ))
            })?;
            Ok(CapabilityExpression::ReqRef(path))
        }
        _ => Ok(CapabilityExpression::Literal(parse_literal(cursor)?)),
    }
}

/// Parses a literal value at the cursor. Shared with the document parser.
pub(crate) fn parse_literal(cursor: &mut Cursor) -> Result<LeafValue, Diagnostics> {
    match cursor.peek().token.clone() {
        Token::Number { text, integral } => {
            let err = |msg: String| cursor.error_here(msg);
            let value = if integral {
                match text.parse::<i64>() {
                    Ok(i) => LeafValue::Integer(i),
                    Err(_) => return Err(err(format!("integer literal `{text}` out of range"))),
                }
            } else {
                match text.parse::<f64>() {
                    Ok(f) if f.is_finite() => LeafValue::real(f),
                    _ => return Err(err(format!("real literal `{text}` overflows"))),
                }
            };
            cursor.advance();
            Ok(value)
        }
        Token::Duration(seconds) => {
            cursor.advance();
            Ok(LeafValue::Duration(seconds))
        }
        Token::Size(bytes) => {
            cursor.advance();
            Ok(LeafValue::DataSize(bytes))
        }
        Token::Str(text) => {
            cursor.advance();
            Ok(LeafValue::Text(text))
        }
        Token::Ident(word) if word == "true" => {
            cursor.advance();
            Ok(LeafValue::Boolean(true))
        }
        Token::Ident(word) if word == "false" => {
            cursor.advance();
            Ok(LeafValue::Boolean(false))
        }
        Token::LBracket => {
            cursor.advance();
            let lower = expect_real(cursor)?;
            cursor.expect(Token::Comma, "`,`")?;
            let upper = expect_real(cursor)?;
            let close = cursor.expect(Token::RBracket, "`]`")?;
            let interval = Interval::new(lower, upper).map_err(|e| {
                Diagnostics::one(crate::parse::diagnostics::ParseDiagnostic::error(
                    close.line,
                    close.column,
                    e.to_string(),
                ))
            })?;
            Ok(LeafValue::Interval(interval))
        }
        Token::LBrace => {
            cursor.advance();
            let mut items = std::collections::BTreeSet::new();
            if !cursor.eat(&Token::RBrace) {
                loop {
                    match cursor.peek().token.clone() {
                        Token::Str(text) => {
                            cursor.advance();
                            items.insert(text);
                        }
                        other => {
                            return Err(cursor.error_here(format!(
                                "expected string in text set, found {}",
                                other.describe()
                            )))
                        }
                    }
                    if cursor.eat(&Token::Comma) {
                        continue;
                    }
                    cursor.expect(Token::RBrace, "`}`")?;
                    break;
                }
            }
            Ok(LeafValue::TextSet(items))
        }
        other => Err(cursor.error_here(format!(
            "expected a value, found {}",
            other.describe()
        ))),
    }
}

fn expect_real(cursor: &mut Cursor) -> Result<f64, Diagnostics> {
    match cursor.peek().token.clone() {
        Token::Number { text, .. } => match text.parse::<f64>() {
            Ok(f) if f.is_finite() => {
                cursor.advance();
                Ok(f)
            }
            _ => Err(cursor.error_here(format!("real literal `{text}` overflows"))),
        },
        other => Err(cursor.error_here(format!(
            "expected a number, found {}",
            other.describe()
        ))),
    }
}

//! Canonical YAML writer over the [`Canon`] tree.
//!
//! The emitted subset: block maps and sequences with two-space indent,
//! flow sequences for scalar-only lists, double-quoted strings, and
//! double-quoted keys wherever a plain key could be misread (YAML 1.1
//! booleans, empty, or non-identifier characters).

use crate::export::canon::{real_text, Canon};

pub fn write_yaml(root: &Canon) -> String {
    let mut out = String::new();
    match root {
        Canon::Map(entries) if !entries.is_empty() => write_map(&mut out, entries, 0),
        Canon::Map(_) => out.push_str("{}\n"),
        other => {
            write_inline(&mut out, other);
            out.push('\n');
        }
    }
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_map(out: &mut String, entries: &[(String, Canon)], level: usize) {
    for (key, value) in entries {
        indent(out, level);
        write_key(out, key);
        write_value_after_key(out, value, level);
    }
}

/// Writes the value part of a `key:` line, recursing into blocks.
fn write_value_after_key(out: &mut String, value: &Canon, level: usize) {
    match value {
        Canon::Map(entries) if entries.is_empty() => out.push_str(" {}\n"),
        Canon::Map(entries) => {
            out.push('\n');
            write_map(out, entries, level + 1);
        }
        Canon::Seq(items) if items.is_empty() => out.push_str(" []\n"),
        Canon::Seq(items) if items.iter().all(Canon::is_scalar) => {
            out.push(' ');
            write_flow_seq(out, items);
            out.push('\n');
        }
        Canon::Seq(items) => {
            out.push('\n');
            write_block_seq(out, items, level + 1);
        }
        scalar => {
            out.push(' ');
            write_inline(out, scalar);
            out.push('\n');
        }
    }
}

fn write_block_seq(out: &mut String, items: &[Canon], level: usize) {
    for item in items {
        indent(out, level);
        out.push('-');
        match item {
            Canon::Map(entries) if !entries.is_empty() => {
                // first entry shares the dash line, the rest align under it
                let (first_key, first_value) = &entries[0];
                out.push(' ');
                write_key(out, first_key);
                write_value_after_key(out, first_value, level + 1);
                for (key, value) in &entries[1..] {
                    indent(out, level + 1);
                    write_key(out, key);
                    write_value_after_key(out, value, level + 1);
                }
            }
            Canon::Map(_) => out.push_str(" {}\n"),
            Canon::Seq(inner) if inner.iter().all(Canon::is_scalar) => {
                out.push(' ');
                write_flow_seq(out, inner);
                out.push('\n');
            }
            Canon::Seq(inner) => {
                out.push('\n');
                write_block_seq(out, inner, level + 1);
            }
            scalar => {
                out.push(' ');
                write_inline(out, scalar);
                out.push('\n');
            }
        }
    }
}

fn write_flow_seq(out: &mut String, items: &[Canon]) {
    out.push('[');
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_inline(out, item);
    }
    out.push(']');
}

fn write_inline(out: &mut String, value: &Canon) {
    match value {
        Canon::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Canon::Int(i) => out.push_str(&i.to_string()),
        Canon::Real(r) => out.push_str(&real_text(*r)),
        Canon::Str(s) => write_quoted(out, s),
        Canon::Seq(_) | Canon::Map(_) => unreachable!("containers are written in block form"),
    }
}

fn write_key(out: &mut String, key: &str) {
    if plain_key_safe(key) {
        out.push_str(key);
    } else {
        write_quoted(out, key);
    }
    out.push(':');
}

/// A key stays unquoted only when it is an identifier-or-path and not
/// one of the words YAML 1.1 readers treat as booleans or null.
fn plain_key_safe(key: &str) -> bool {
    if key.is_empty() {
        return false;
    }
    if matches!(
        key,
        "y" | "n" | "yes" | "no" | "on" | "off" | "true" | "false" | "null"
    ) {
        return false;
    }
    let mut chars = key.chars();
    let first = chars.next().unwrap();
    if !first.is_ascii_lowercase() {
        return false;
    }
    key.chars()
        .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '/')
}

fn write_quoted(out: &mut String, text: &str) {
    out.push('"');
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('"');
}

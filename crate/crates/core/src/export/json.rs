//! Canonical JSON writer over the [`Canon`] tree: two-space indent, keys
//! in builder order, reals in shortest round-trip form.

use crate::export::canon::{real_text, Canon};

pub fn write_json(root: &Canon) -> String {
    let mut out = String::new();
    write_value(&mut out, root, 0);
    out.push('\n');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, value: &Canon, level: usize) {
    match value {
        Canon::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Canon::Int(i) => out.push_str(&i.to_string()),
        Canon::Real(r) => out.push_str(&real_text(*r)),
        Canon::Str(s) => write_string(out, s),
        Canon::Seq(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            if items.iter().all(Canon::is_scalar) {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, level);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, item, level + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Canon::Map(entries) => {
            if entries.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (key, value)) in entries.iter().enumerate() {
                indent(out, level + 1);
                write_string(out, key);
                out.push_str(": ");
                write_value(out, value, level + 1);
                if i + 1 < entries.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

fn write_string(out: &mut String, text: &str) {
    out.push('"');
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            other => out.push(other),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_valid_json() {
        let canon = Canon::Map(vec![
            ("id".to_string(), Canon::str("doc")),
            (
                "assignments".to_string(),
                Canon::Map(vec![("a/b".to_string(), Canon::Real(126.0))]),
            ),
            ("list".to_string(), Canon::Seq(vec![])),
        ]);
        let text = write_json(&canon);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["assignments"]["a/b"], serde_json::json!(126.0));
        assert!(text.contains("\"a/b\": 126.0"));
    }
}

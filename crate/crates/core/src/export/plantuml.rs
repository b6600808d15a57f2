//! PlantUML rendering of a document for human review: the document id at
//! the root, one rectangle per branch on the way to an assigned leaf, and
//! one rectangle per assignment labelled `name = value`.

use std::collections::BTreeMap;

use crate::model::document::OddDocument;
use crate::model::value::LeafValue;

pub fn to_plantuml(doc: &OddDocument) -> String {
    let mut out = String::from("@startuml\n");
    let mut next_id = 0usize;
    let mut alloc = |out: &mut String, label: &str| {
        let id = format!("n{next_id}");
        next_id += 1;
        out.push_str(&format!("rectangle \"{}\" as {}\n", sanitize(label), id));
        id
    };

    let root = alloc(&mut out, doc.id());
    // branch path prefix -> node id
    let mut branches: BTreeMap<String, String> = BTreeMap::new();

    for (path, value) in doc.assignments() {
        let segments: Vec<&str> = path.segments().collect();
        let mut parent = root.clone();
        let mut prefix = String::new();
        for segment in &segments[..segments.len() - 1] {
            if !prefix.is_empty() {
                prefix.push('/');
            }
            prefix.push_str(segment);
            let id = match branches.get(&prefix) {
                Some(id) => id.clone(),
                None => {
                    let id = alloc(&mut out, segment);
                    out.push_str(&format!("{parent} --> {id}\n"));
                    branches.insert(prefix.clone(), id.clone());
                    id
                }
            };
            parent = id;
        }
        let label = format!("{} = {}", path.leaf_name(), label_value(value));
        let leaf = alloc(&mut out, &label);
        out.push_str(&format!("{parent} --> {leaf}\n"));
    }

    out.push_str("@enduml\n");
    out
}

/// Text values appear bare, everything else in its literal form;
/// expressions show their source text.
fn label_value(value: &LeafValue) -> String {
    match value {
        LeafValue::Text(s) => s.clone(),
        LeafValue::Expression(expr) => expr.print(),
        other => other.to_literal_text(),
    }
}

/// PlantUML labels sit inside double quotes and have no escape for them.
fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| match c {
            '"' => '\'',
            '\n' | '\r' => ' ',
            other => other,
        })
        .collect()
}

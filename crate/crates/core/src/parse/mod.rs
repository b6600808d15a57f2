//! Parsers for taxonomy files, document files, and the expression
//! mini-language. All functions are pure over the input text; errors come
//! back as located [`Diagnostics`] and never as partial model objects.

mod cursor;
pub mod diagnostics;
pub mod document;
pub mod expression;
pub mod lexer;
pub mod taxonomy;

pub use diagnostics::{Diagnostics, ParseDiagnostic, Severity};
pub use document::{parse_document, parse_document_unvalidated, ParsedDocument};
pub use expression::parse_expression;
pub use taxonomy::{parse_taxonomies, parse_taxonomy};

use crate::model::taxonomy::TaxonomyRegistry;

/// Parses every taxonomy in `source` and registers it.
pub fn load_taxonomies(
    registry: &mut TaxonomyRegistry,
    source: &str,
) -> Result<(), Diagnostics> {
    let taxonomies = parse_taxonomies(source, registry)?;
    for taxonomy in taxonomies {
        registry
            .insert(taxonomy)
            .expect("duplicates are rejected during parsing");
    }
    Ok(())
}

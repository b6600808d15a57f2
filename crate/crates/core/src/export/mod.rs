//! Canonical machine-readable exports (YAML and JSON) and PlantUML
//! rendering.
//!
//! Canonical means: assignment keys sorted by path, reals in shortest
//! round-trip form, one fixed layout per object; equal inputs produce
//! byte-identical text, and parsing a document's canonical text yields an
//! equal document.

mod canon;
mod import;
mod json;
mod plantuml;
mod yaml;

use crate::allocate::AllocationReport;
use crate::compare::ComparisonVerdict;
use crate::model::document::OddDocument;
use crate::model::taxonomy::{Taxonomy, TaxonomyRegistry};

pub use import::ImportError;
pub use plantuml::to_plantuml;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Yaml,
    Json,
}

impl Format {
    pub fn from_name(name: &str) -> Option<Format> {
        match name {
            "yaml" => Some(Format::Yaml),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Format::Yaml => "yaml",
            Format::Json => "json",
        }
    }
}

/// Anything with a canonical text form.
#[derive(Debug, Clone, Copy)]
pub enum Exportable<'a> {
    Taxonomy(&'a Taxonomy),
    Document(&'a OddDocument),
    Verdict(&'a ComparisonVerdict),
    Report(&'a AllocationReport),
}

impl<'a> From<&'a Taxonomy> for Exportable<'a> {
    fn from(value: &'a Taxonomy) -> Self {
        Exportable::Taxonomy(value)
    }
}

impl<'a> From<&'a OddDocument> for Exportable<'a> {
    fn from(value: &'a OddDocument) -> Self {
        Exportable::Document(value)
    }
}

impl<'a> From<&'a ComparisonVerdict> for Exportable<'a> {
    fn from(value: &'a ComparisonVerdict) -> Self {
        Exportable::Verdict(value)
    }
}

impl<'a> From<&'a AllocationReport> for Exportable<'a> {
    fn from(value: &'a AllocationReport) -> Self {
        Exportable::Report(value)
    }
}

/// Serializes a validated object to canonical text in the given format.
pub fn to_canonical_text<'a>(object: impl Into<Exportable<'a>>, format: Format) -> String {
    let canon = match object.into() {
        Exportable::Taxonomy(tax) => canon::taxonomy_canon(tax),
        Exportable::Document(doc) => canon::document_canon(doc),
        Exportable::Verdict(verdict) => canon::verdict_canon(verdict),
        Exportable::Report(report) => canon::report_canon(report),
    };
    match format {
        Format::Yaml => yaml::write_yaml(&canon),
        Format::Json => json::write_json(&canon),
    }
}

/// Parses a document from its canonical text form.
pub fn document_from_text(
    text: &str,
    format: Format,
    registry: &TaxonomyRegistry,
) -> Result<OddDocument, ImportError> {
    match format {
        Format::Yaml => import::document_from_yaml(text, registry),
        Format::Json => import::document_from_json(text, registry),
    }
}

//! Formalized ODD taxonomies extended with test-environment attributes,
//! rule-based capability documents, containment checking, and automatic
//! test case allocation.
//!
//! The pipeline: parse taxonomies and documents ([`parse`]), validate
//! them ([`model`]), concretize conditional capabilities against a
//! requirement ([`eval`]), decide containment ([`compare`]), allocate a
//! suite across environments ([`allocate`]), and export canonical
//! YAML/JSON and PlantUML ([`export`]).
//!
//! ```
//! use oddfit_core::{fixtures, generic_compare};
//!
//! let registry = fixtures::builtin_registry();
//! let tax = registry.get("ext_odd").unwrap();
//! let requirement = fixtures::parse_fixture(fixtures::REQUIREMENT);
//! let capability = fixtures::parse_fixture(fixtures::CARLA_CAPABILITY);
//!
//! let verdict = generic_compare(&capability, &requirement, tax).unwrap();
//! assert!(!verdict.within);
//! for leaf in verdict.leaf_verdicts.iter().filter(|v| !v.pass) {
//!     eprintln!("{}: {}", leaf.path, leaf.message);
//! }
//! ```
//!
//! All types are immutable after construction and all operations are
//! pure; everything is safe to use concurrently without coordination.

pub mod allocate;
pub mod compare;
pub mod eval;
pub mod export;
pub mod expr;
pub mod fixtures;
pub mod model;
pub mod parse;
pub mod path;
pub mod synth;

pub use allocate::{allocate, rank_feasible, AllocateError, AllocationReport, Environment};
pub use compare::{compare_leaf, generic_compare, ComparisonVerdict, LeafVerdict, VerdictRule};
pub use eval::{
    concretize_capability, evaluate_expression, Concretization, EvaluationContext, TraceEntry,
};
pub use export::{document_from_text, to_canonical_text, to_plantuml, Exportable, Format};
pub use expr::{CapabilityExpression, CompareOp};
pub use model::{
    extend_taxonomy, validate_document, LeafKind, LeafType, LeafValue, OddDocument, Role,
    Taxonomy, TaxonomyNode, TaxonomyRegistry, TestAttributes, Violation,
};
pub use parse::{parse_document, parse_expression, parse_taxonomies, parse_taxonomy};
pub use path::NodePath;

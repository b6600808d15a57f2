//! Built-in taxonomy and case-study fixture documents, embedded from the
//! repository's `fixtures/` directory.

use crate::model::document::OddDocument;
use crate::model::taxonomy::TaxonomyRegistry;
use crate::parse::document::parse_document;
use crate::parse::load_taxonomies;

/// The shipped base taxonomy (`odd`) and its test-environment extension
/// (`ext_odd`).
pub const TAXONOMY: &str = include_str!("../../../fixtures/taxonomy.odd");

/// Case-study test requirement: low sun in the camera's glare window.
pub const REQUIREMENT: &str = include_str!("../../../fixtures/case_study/requirement.odd");

/// CARLA simulator capability with the conditional SUT-fidelity rule.
pub const CARLA_CAPABILITY: &str = include_str!("../../../fixtures/case_study/carla.odd");

/// Scale-truck rig capability covering low-sun elevations.
pub const SCALE_TRUCK_CAPABILITY: &str =
    include_str!("../../../fixtures/case_study/scale_truck.odd");

/// A registry preloaded with the shipped `odd` and `ext_odd` taxonomies.
pub fn builtin_registry() -> TaxonomyRegistry {
    let mut registry = TaxonomyRegistry::new();
    load_taxonomies(&mut registry, TAXONOMY).expect("shipped taxonomy parses");
    registry
}

/// Parses one of the shipped documents against the built-in registry.
pub fn parse_fixture(source: &str) -> OddDocument {
    parse_document(source, &builtin_registry(), None).expect("shipped fixture parses")
}

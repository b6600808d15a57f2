//! The data model: taxonomies, typed documents, and validation.

pub mod document;
pub mod taxonomy;
pub mod validate;
pub mod value;

pub use document::{DocumentError, OddDocument, Role};
pub use taxonomy::{
    extend_taxonomy, Addition, ExtendError, RegistryError, Taxonomy, TaxonomyError, TaxonomyNode,
    TaxonomyRegistry,
};
pub use validate::{validate_document, Violation, ViolationCode};
pub use value::{
    is_test_attribute, AttributeError, Interval, LeafKind, LeafType, LeafValue, RangeConstraint,
    TestAttributes, ValueError, TEST_ATTRIBUTE_NAMES,
};

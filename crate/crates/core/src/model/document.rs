//! Typed documents: concrete assignments of values to taxonomy leaves.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::value::{
    AttributeError, LeafValue, TestAttributes, TEST_ATTRIBUTE_NAMES,
};
use crate::path::{is_valid_name, NodePath};

/// Whether a document states what a test case needs (requirement) or
/// what an environment provides (capability).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Requirement,
    Capability,
}

impl Role {
    pub fn name(&self) -> &'static str {
        match self {
            Role::Requirement => "requirement",
            Role::Capability => "capability",
        }
    }

    pub fn from_name(name: &str) -> Option<Role> {
        match name {
            "requirement" => Some(Role::Requirement),
            "capability" => Some(Role::Capability),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("invalid document id {0:?}")]
    InvalidId(String),
    #[error("path {0} is not assigned in the document")]
    UnknownPath(NodePath),
    #[error(transparent)]
    Attribute(#[from] AttributeError),
}

/// A requirement or capability document: an id, a taxonomy reference,
/// and a map from leaf paths to values. The four test-environment
/// attributes live in the map like any other leaf; [`OddDocument::test_attributes`]
/// extracts them as a [`TestAttributes`] once they are concrete.
#[derive(Debug, Clone, PartialEq)]
pub struct OddDocument {
    id: String,
    role: Role,
    taxonomy_id: String,
    assignments: BTreeMap<NodePath, LeafValue>,
}

impl OddDocument {
    pub fn new(
        id: impl Into<String>,
        role: Role,
        taxonomy_id: impl Into<String>,
    ) -> Result<OddDocument, DocumentError> {
        let id = id.into();
        if !is_valid_name(&id) {
            return Err(DocumentError::InvalidId(id));
        }
        Ok(OddDocument {
            id,
            role,
            taxonomy_id: taxonomy_id.into(),
            assignments: BTreeMap::new(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn taxonomy_id(&self) -> &str {
        &self.taxonomy_id
    }

    pub fn assignments(&self) -> &BTreeMap<NodePath, LeafValue> {
        &self.assignments
    }

    /// Sets or replaces the value at `path`.
    pub fn assign(&mut self, path: NodePath, value: LeafValue) {
        self.assignments.insert(path, value);
    }

    pub fn with_assignment(mut self, path: NodePath, value: LeafValue) -> OddDocument {
        self.assign(path, value);
        self
    }

    /// The stored value at `path`.
    pub fn get_leaf(&self, path: &NodePath) -> Result<&LeafValue, DocumentError> {
        self.assignments
            .get(path)
            .ok_or_else(|| DocumentError::UnknownPath(path.clone()))
    }

    pub fn has_expressions(&self) -> bool {
        self.assignments.values().any(|v| !v.is_concrete())
    }

    /// Copy of the document under a different role and id. Used to treat
    /// an expression-free document as its own capability (or vice versa).
    pub fn with_role(&self, role: Role) -> OddDocument {
        OddDocument {
            id: self.id.clone(),
            role,
            taxonomy_id: self.taxonomy_id.clone(),
            assignments: self.assignments.clone(),
        }
    }

    /// Extracts the four test-environment attribute levels. Fails if any
    /// attribute is unassigned or not a concrete integer.
    pub fn test_attributes(&self) -> Result<TestAttributes, DocumentError> {
        let mut levels = [0i64; 4];
        for (slot, name) in levels.iter_mut().zip(TEST_ATTRIBUTE_NAMES.iter()) {
            let path = NodePath::from_name(name);
            match self.assignments.get(&path) {
                Some(LeafValue::Integer(level)) => *slot = *level,
                Some(_) => return Err(AttributeError::NotConcrete(name).into()),
                None => return Err(AttributeError::Missing(name).into()),
            }
        }
        Ok(TestAttributes::new(levels[0], levels[1], levels[2], levels[3])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> OddDocument {
        OddDocument::new("odd_req", Role::Requirement, "ext_odd").unwrap()
    }

    #[test]
    fn get_leaf_returns_stored_value() {
        let path = NodePath::parse("env/angle").unwrap();
        let d = doc().with_assignment(path.clone(), LeafValue::real(6.0));
        assert_eq!(d.get_leaf(&path).unwrap(), &LeafValue::Real(6.0));
    }

    #[test]
    fn get_leaf_on_empty_document_is_unknown_path() {
        let path = NodePath::parse("env/angle").unwrap();
        assert_eq!(
            doc().get_leaf(&path),
            Err(DocumentError::UnknownPath(path))
        );
    }

    #[test]
    fn test_attributes_requires_all_four_concrete_levels() {
        let mut d = doc();
        for (name, level) in TEST_ATTRIBUTE_NAMES.iter().zip([1i64, 1, 2, 2]) {
            d.assign(NodePath::from_name(name), LeafValue::Integer(level));
        }
        let attrs = d.test_attributes().unwrap();
        assert_eq!(attrs.levels(), [1, 1, 2, 2]);

        let partial = doc().with_assignment(
            NodePath::from_name("sut_fidelity"),
            LeafValue::Integer(2),
        );
        assert!(partial.test_attributes().is_err());
    }

    #[test]
    fn role_flip_preserves_assignments() {
        let path = NodePath::parse("env/angle").unwrap();
        let d = doc().with_assignment(path.clone(), LeafValue::real(6.0));
        let flipped = d.with_role(Role::Capability);
        assert_eq!(flipped.role(), Role::Capability);
        assert_eq!(flipped.assignments(), d.assignments());
    }
}

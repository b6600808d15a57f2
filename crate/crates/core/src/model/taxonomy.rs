//! Taxonomy trees: the schema side of the model.
//!
//! A taxonomy is an ordered tree of named nodes. Branches group, leaves
//! declare a [`LeafType`]. An extending taxonomy materializes every node
//! of its base plus the additions, so documents written against the base
//! remain valid against the extension.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::value::LeafType;
use crate::path::{is_valid_name, NodePath};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TaxonomyError {
    #[error("invalid node name {0:?}")]
    InvalidName(String),
    #[error("duplicate sibling name {0:?}")]
    DuplicateSibling(String),
    #[error("branch {0:?} must have at least one child")]
    EmptyBranch(String),
    #[error("taxonomy {0:?} must declare at least one node")]
    EmptyTaxonomy(String),
    #[error("invalid taxonomy id {0:?}")]
    InvalidId(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtendError {
    #[error("addition {path} collides with an existing node")]
    PathCollision { path: NodePath },
    #[error("parent path {path} does not exist or is not a branch")]
    UnknownParent { path: NodePath },
    #[error(transparent)]
    Structure(#[from] TaxonomyError),
}

#[derive(Debug, Clone, PartialEq)]
enum NodeBody {
    Branch { children: Vec<TaxonomyNode> },
    Leaf { leaf_type: LeafType, required: bool },
}

/// One node of a taxonomy tree. Either a branch with ordered children or
/// a typed leaf. Node names are unique among siblings.
#[derive(Debug, Clone, PartialEq)]
pub struct TaxonomyNode {
    name: String,
    body: NodeBody,
}

impl TaxonomyNode {
    pub fn branch(
        name: impl Into<String>,
        children: Vec<TaxonomyNode>,
    ) -> Result<TaxonomyNode, TaxonomyError> {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(TaxonomyError::InvalidName(name));
        }
        if children.is_empty() {
            return Err(TaxonomyError::EmptyBranch(name));
        }
        check_sibling_names(&children)?;
        Ok(TaxonomyNode {
            name,
            body: NodeBody::Branch { children },
        })
    }

    pub fn leaf(
        name: impl Into<String>,
        leaf_type: LeafType,
        required: bool,
    ) -> Result<TaxonomyNode, TaxonomyError> {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(TaxonomyError::InvalidName(name));
        }
        Ok(TaxonomyNode {
            name,
            body: NodeBody::Leaf {
                leaf_type,
                required,
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.body, NodeBody::Leaf { .. })
    }

    pub fn children(&self) -> &[TaxonomyNode] {
        match &self.body {
            NodeBody::Branch { children } => children,
            NodeBody::Leaf { .. } => &[],
        }
    }

    pub fn leaf_type(&self) -> Option<&LeafType> {
        match &self.body {
            NodeBody::Leaf { leaf_type, .. } => Some(leaf_type),
            NodeBody::Branch { .. } => None,
        }
    }

    pub fn required(&self) -> bool {
        match &self.body {
            NodeBody::Leaf { required, .. } => *required,
            NodeBody::Branch { .. } => false,
        }
    }
}

fn check_sibling_names(nodes: &[TaxonomyNode]) -> Result<(), TaxonomyError> {
    let mut seen = BTreeSet::new();
    for node in nodes {
        if !seen.insert(node.name.as_str()) {
            return Err(TaxonomyError::DuplicateSibling(node.name.clone()));
        }
    }
    Ok(())
}

/// A complete taxonomy: id, top-level nodes, and (for extensions) the
/// chain of base taxonomy ids it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Taxonomy {
    id: String,
    nodes: Vec<TaxonomyNode>,
    extends: Option<String>,
    ancestors: Vec<String>,
}

impl Taxonomy {
    pub fn new(id: impl Into<String>, nodes: Vec<TaxonomyNode>) -> Result<Taxonomy, TaxonomyError> {
        let id = id.into();
        if !is_valid_name(&id) {
            return Err(TaxonomyError::InvalidId(id));
        }
        if nodes.is_empty() {
            return Err(TaxonomyError::EmptyTaxonomy(id));
        }
        check_sibling_names(&nodes)?;
        Ok(Taxonomy {
            id,
            nodes,
            extends: None,
            ancestors: Vec::new(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn nodes(&self) -> &[TaxonomyNode] {
        &self.nodes
    }

    /// Direct base taxonomy id, if this taxonomy was built by extension.
    pub fn extends(&self) -> Option<&str> {
        self.extends.as_deref()
    }

    /// Transitive base ids, outermost first.
    pub fn ancestors(&self) -> &[String] {
        &self.ancestors
    }

    /// True when a document declared against `taxonomy_id` can be
    /// interpreted under this taxonomy: same id, or this taxonomy
    /// extends it (directly or transitively).
    pub fn covers(&self, taxonomy_id: &str) -> bool {
        self.id == taxonomy_id || self.ancestors.iter().any(|a| a == taxonomy_id)
    }

    pub fn find(&self, path: &NodePath) -> Option<&TaxonomyNode> {
        let mut nodes = self.nodes.as_slice();
        let mut found: Option<&TaxonomyNode> = None;
        for segment in path.segments() {
            let node = nodes.iter().find(|n| n.name() == segment)?;
            nodes = node.children();
            found = Some(node);
        }
        found
    }

    /// The leaf type at `path`, or `None` if the path is absent or names
    /// a branch.
    pub fn leaf_type(&self, path: &NodePath) -> Option<&LeafType> {
        self.find(path).and_then(|n| n.leaf_type())
    }

    /// All leaf paths in depth-first declaration order.
    pub fn leaf_paths(&self) -> Vec<NodePath> {
        let mut paths = Vec::new();
        collect_leaf_paths(&self.nodes, None, &mut paths);
        paths
    }

    /// Leaf paths flagged `required`, in depth-first declaration order.
    pub fn required_leaf_paths(&self) -> Vec<NodePath> {
        let mut paths = Vec::new();
        collect_required_paths(&self.nodes, None, &mut paths);
        paths
    }
}

fn collect_leaf_paths(nodes: &[TaxonomyNode], prefix: Option<&NodePath>, into: &mut Vec<NodePath>) {
    for node in nodes {
        let path = match prefix {
            Some(p) => p.join(node.name()),
            None => NodePath::from_name(node.name()),
        };
        if node.is_leaf() {
            into.push(path);
        } else {
            collect_leaf_paths(node.children(), Some(&path), into);
        }
    }
}

fn collect_required_paths(
    nodes: &[TaxonomyNode],
    prefix: Option<&NodePath>,
    into: &mut Vec<NodePath>,
) {
    for node in nodes {
        let path = match prefix {
            Some(p) => p.join(node.name()),
            None => NodePath::from_name(node.name()),
        };
        if node.is_leaf() {
            if node.required() {
                into.push(path);
            }
        } else {
            collect_required_paths(node.children(), Some(&path), into);
        }
    }
}

/// A node to graft onto a taxonomy: the parent branch path (`None` for
/// the top level) and the subtree to add there.
#[derive(Debug, Clone, PartialEq)]
pub struct Addition {
    pub parent: Option<NodePath>,
    pub node: TaxonomyNode,
}

impl Addition {
    pub fn top_level(node: TaxonomyNode) -> Addition {
        Addition { parent: None, node }
    }

    pub fn under(parent: NodePath, node: TaxonomyNode) -> Addition {
        Addition {
            parent: Some(parent),
            node,
        }
    }
}

/// Builds a new taxonomy containing every node of `base` plus the
/// additions. `base` is unmodified. Any addition whose full path already
/// exists in the working tree is a collision, regardless of type.
pub fn extend_taxonomy(
    base: &Taxonomy,
    id: impl Into<String>,
    additions: &[Addition],
) -> Result<Taxonomy, ExtendError> {
    let id = id.into();
    if !is_valid_name(&id) {
        return Err(TaxonomyError::InvalidId(id).into());
    }
    let mut nodes = base.nodes.clone();
    for addition in additions {
        let target = match &addition.parent {
            None => &mut nodes,
            Some(parent) => {
                find_branch_children(&mut nodes, parent).ok_or(ExtendError::UnknownParent {
                    path: parent.clone(),
                })?
            }
        };
        if target.iter().any(|n| n.name() == addition.node.name()) {
            let path = match &addition.parent {
                Some(parent) => parent.join(addition.node.name()),
                None => NodePath::from_name(addition.node.name()),
            };
            return Err(ExtendError::PathCollision { path });
        }
        target.push(addition.node.clone());
    }
    let mut ancestors = base.ancestors.clone();
    ancestors.push(base.id.clone());
    Ok(Taxonomy {
        id,
        nodes,
        extends: Some(base.id.clone()),
        ancestors,
    })
}

fn find_branch_children<'a>(
    nodes: &'a mut Vec<TaxonomyNode>,
    path: &NodePath,
) -> Option<&'a mut Vec<TaxonomyNode>> {
    let mut current = nodes;
    for segment in path.segments() {
        let node = current.iter_mut().find(|n| n.name == segment)?;
        match &mut node.body {
            NodeBody::Branch { children } => current = children,
            NodeBody::Leaf { .. } => return None,
        }
    }
    Some(current)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegistryError {
    #[error("taxonomy {0:?} is already registered")]
    Duplicate(String),
    #[error("unknown taxonomy {0:?}")]
    Unknown(String),
    #[error("taxonomies {0:?} and {1:?} are not extension-compatible")]
    Incompatible(String, String),
}

/// Loaded taxonomies, addressable by id.
#[derive(Debug, Clone, Default)]
pub struct TaxonomyRegistry {
    taxonomies: BTreeMap<String, Taxonomy>,
}

impl TaxonomyRegistry {
    pub fn new() -> TaxonomyRegistry {
        TaxonomyRegistry::default()
    }

    pub fn insert(&mut self, taxonomy: Taxonomy) -> Result<(), RegistryError> {
        if self.taxonomies.contains_key(taxonomy.id()) {
            return Err(RegistryError::Duplicate(taxonomy.id().to_string()));
        }
        self.taxonomies.insert(taxonomy.id().to_string(), taxonomy);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Taxonomy> {
        self.taxonomies.get(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.taxonomies.keys().map(|s| s.as_str())
    }

    /// Resolves the taxonomy under which two documents can be compared:
    /// the one of the pair that covers the other.
    pub fn resolve_common(&self, a: &str, b: &str) -> Result<&Taxonomy, RegistryError> {
        let ta = self
            .get(a)
            .ok_or_else(|| RegistryError::Unknown(a.to_string()))?;
        let tb = self
            .get(b)
            .ok_or_else(|| RegistryError::Unknown(b.to_string()))?;
        if ta.covers(b) {
            Ok(ta)
        } else if tb.covers(a) {
            Ok(tb)
        } else {
            Err(RegistryError::Incompatible(a.to_string(), b.to_string()))
        }
    }
}

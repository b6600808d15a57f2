//! Slash-separated paths addressing nodes inside a taxonomy or document.

use std::fmt;

use thiserror::Error;

/// A `/`-separated sequence of node names addressing a taxonomy node.
///
/// Each segment matches `[a-z][a-z0-9_]*`. Paths are relative to the
/// taxonomy root; the root itself has the empty path and cannot be
/// addressed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid path {text:?}: {reason}")]
pub struct PathError {
    pub text: String,
    pub reason: &'static str,
}

/// Checks a single node name: `[a-z][a-z0-9_]*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl NodePath {
    pub fn parse(text: &str) -> Result<NodePath, PathError> {
        if text.is_empty() {
            return Err(PathError {
                text: text.to_string(),
                reason: "path must have at least one segment",
            });
        }
        for segment in text.split('/') {
            if !is_valid_name(segment) {
                return Err(PathError {
                    text: text.to_string(),
                    reason: "segments must match [a-z][a-z0-9_]*",
                });
            }
        }
        Ok(NodePath(text.to_string()))
    }

    /// Builds a single-segment path from a known-valid name.
    pub fn from_name(name: &str) -> NodePath {
        debug_assert!(is_valid_name(name));
        NodePath(name.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('/')
    }

    /// The final segment.
    pub fn leaf_name(&self) -> &str {
        self.0.rsplit('/').next().unwrap()
    }

    pub fn join(&self, segment: &str) -> NodePath {
        debug_assert!(is_valid_name(segment));
        NodePath(format!("{}/{}", self.0, segment))
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for NodePath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodePath::parse(s)
    }
}

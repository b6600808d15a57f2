//! Leaf types and leaf values.
//!
//! A taxonomy declares what each leaf may hold ([`LeafType`]); a document
//! assigns each leaf a concrete value or, in capability documents, an
//! expression over the bound requirement ([`LeafValue`]).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::expr::CapabilityExpression;
use crate::path::NodePath;

/// The value kind a leaf is declared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LeafKind {
    Boolean,
    Text,
    Integer,
    Real,
    /// Seconds, stored as a 64-bit real.
    Duration,
    /// Bytes, stored as a 64-bit integer.
    DataSize,
    TextSet,
}

impl LeafKind {
    pub fn name(&self) -> &'static str {
        match self {
            LeafKind::Boolean => "boolean",
            LeafKind::Text => "text",
            LeafKind::Integer => "integer",
            LeafKind::Real => "real",
            LeafKind::Duration => "duration",
            LeafKind::DataSize => "data_size",
            LeafKind::TextSet => "text_set",
        }
    }

    pub fn from_name(name: &str) -> Option<LeafKind> {
        Some(match name {
            "boolean" => LeafKind::Boolean,
            "text" => LeafKind::Text,
            "integer" => LeafKind::Integer,
            "real" => LeafKind::Real,
            "duration" => LeafKind::Duration,
            "data_size" => LeafKind::DataSize,
            "text_set" => LeafKind::TextSet,
            _ => return None,
        })
    }

    /// Kinds that a numeric range constraint may be attached to.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            LeafKind::Integer | LeafKind::Real | LeafKind::Duration | LeafKind::DataSize
        )
    }
}

impl fmt::Display for LeafKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueError {
    #[error("interval bounds must be finite and ordered (got [{lower}, {upper}])")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("range constraint bounds must be finite and ordered (got {lower}..{upper})")]
    InvalidConstraint { lower: f64, upper: f64 },
    #[error("a range constraint requires a numeric leaf kind, not {kind}")]
    ConstraintOnNonNumeric { kind: LeafKind },
}

/// Inclusive numeric range constraint attached to a leaf declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeConstraint {
    lower: f64,
    upper: f64,
}

impl RangeConstraint {
    pub fn new(lower: f64, upper: f64) -> Result<RangeConstraint, ValueError> {
        if !lower.is_finite() || !upper.is_finite() || lower > upper {
            return Err(ValueError::InvalidConstraint { lower, upper });
        }
        Ok(RangeConstraint {
            lower: canon_real(lower),
            upper: canon_real(upper),
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Declared type of a taxonomy leaf: kind plus optional unit and range.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafType {
    kind: LeafKind,
    unit: Option<String>,
    constraint: Option<RangeConstraint>,
}

impl LeafType {
    pub fn new(
        kind: LeafKind,
        unit: Option<String>,
        constraint: Option<RangeConstraint>,
    ) -> Result<LeafType, ValueError> {
        if constraint.is_some() && !kind.is_numeric() {
            return Err(ValueError::ConstraintOnNonNumeric { kind });
        }
        Ok(LeafType {
            kind,
            unit,
            constraint,
        })
    }

    pub fn plain(kind: LeafKind) -> LeafType {
        LeafType {
            kind,
            unit: None,
            constraint: None,
        }
    }

    pub fn kind(&self) -> LeafKind {
        self.kind
    }

    pub fn unit(&self) -> Option<&str> {
        self.unit.as_deref()
    }

    pub fn constraint(&self) -> Option<&RangeConstraint> {
        self.constraint.as_ref()
    }
}

/// Closed real interval; a capability uses it to state a covered range,
/// a requirement may use it to state a needed range.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Interval, ValueError> {
        if !lower.is_finite() || !upper.is_finite() || lower > upper {
            return Err(ValueError::InvalidInterval { lower, upper });
        }
        Ok(Interval {
            lower: canon_real(lower),
            upper: canon_real(upper),
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lower, self.upper)
    }
}

/// Normalizes -0.0 to 0.0 so equal values have one canonical rendering.
pub fn canon_real(value: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value
    }
}

/// A value assigned to a taxonomy leaf.
#[derive(Debug, Clone, PartialEq)]
pub enum LeafValue {
    Boolean(bool),
    Text(String),
    Integer(i64),
    /// 64-bit real; comparisons are exact binary comparisons.
    Real(f64),
    /// Seconds.
    Duration(f64),
    /// Bytes.
    DataSize(i64),
    TextSet(BTreeSet<String>),
    Interval(Interval),
    /// Deferred value over the bound requirement; capability documents only.
    Expression(Box<CapabilityExpression>),
}

impl LeafValue {
    pub fn real(value: f64) -> LeafValue {
        LeafValue::Real(canon_real(value))
    }

    pub fn duration_seconds(value: f64) -> LeafValue {
        LeafValue::Duration(canon_real(value))
    }

    pub fn text(value: impl Into<String>) -> LeafValue {
        LeafValue::Text(value.into())
    }

    pub fn text_set<I, S>(items: I) -> LeafValue
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        LeafValue::TextSet(items.into_iter().map(Into::into).collect())
    }

    pub fn expression(expr: CapabilityExpression) -> LeafValue {
        LeafValue::Expression(Box::new(expr))
    }

    /// Short label used in diagnostics.
    pub fn kind_label(&self) -> &'static str {
        match self {
            LeafValue::Boolean(_) => "boolean",
            LeafValue::Text(_) => "text",
            LeafValue::Integer(_) => "integer",
            LeafValue::Real(_) => "real",
            LeafValue::Duration(_) => "duration",
            LeafValue::DataSize(_) => "data_size",
            LeafValue::TextSet(_) => "text_set",
            LeafValue::Interval(_) => "interval",
            LeafValue::Expression(_) => "expression",
        }
    }

    pub fn is_concrete(&self) -> bool {
        !matches!(self, LeafValue::Expression(_))
    }

    /// Whether this value may be assigned to a leaf of the given kind.
    ///
    /// Intervals fit integer and real leaves; a text set fits a text leaf
    /// (the capability offers several texts); expressions fit any leaf but
    /// only in capability documents, which is checked at the document level.
    pub fn is_compatible_with(&self, kind: LeafKind) -> bool {
        matches!(
            (self, kind),
            (LeafValue::Boolean(_), LeafKind::Boolean)
                | (LeafValue::Text(_), LeafKind::Text)
                | (LeafValue::Integer(_), LeafKind::Integer)
                | (LeafValue::Real(_), LeafKind::Real)
                | (LeafValue::Duration(_), LeafKind::Duration)
                | (LeafValue::DataSize(_), LeafKind::DataSize)
                | (LeafValue::TextSet(_), LeafKind::TextSet | LeafKind::Text)
                | (LeafValue::Interval(_), LeafKind::Integer | LeafKind::Real)
                | (LeafValue::Expression(_), _)
        )
    }

    /// Canonical literal text, identical to the expression grammar's
    /// literal forms. Used by the expression printer, diagnostics, and
    /// report messages.
    pub fn to_literal_text(&self) -> String {
        match self {
            LeafValue::Boolean(b) => b.to_string(),
            LeafValue::Text(s) => quote_text(s),
            LeafValue::Integer(i) => i.to_string(),
            LeafValue::Real(r) => format!("{:?}", canon_real(*r)),
            LeafValue::Duration(s) => format!("{:?}s", canon_real(*s)),
            LeafValue::DataSize(b) => format!("{b}b"),
            LeafValue::TextSet(items) => {
                let inner: Vec<String> = items.iter().map(|s| quote_text(s)).collect();
                format!("{{{}}}", inner.join(", "))
            }
            LeafValue::Interval(iv) => iv.to_string(),
            LeafValue::Expression(e) => format!("({e})"),
        }
    }
}

impl fmt::Display for LeafValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal_text())
    }
}

/// Double-quotes a text value, escaping `\` `"` and the control characters
/// the grammar admits.
pub fn quote_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out.push('"');
    out
}

/// Names of the four ordinal test-environment attributes, in report order.
pub const TEST_ATTRIBUTE_NAMES: [&str; 4] = [
    "safety_hazard_mitigation",
    "test_complexity",
    "test_environment_fidelity",
    "sut_fidelity",
];

/// Whether a path addresses one of the four test-environment attributes.
pub fn is_test_attribute(path: &NodePath) -> bool {
    TEST_ATTRIBUTE_NAMES.contains(&path.as_str())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttributeError {
    #[error("attribute {name} must be between 1 and 3, got {value}")]
    OutOfRange { name: &'static str, value: i64 },
    #[error("attribute {0} is not assigned")]
    Missing(&'static str),
    #[error("attribute {0} is not a concrete integer level")]
    NotConcrete(&'static str),
}

/// The four ordinal test-environment attribute levels (1=low, 2=medium,
/// 3=high). Higher levels include the properties of the lower levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestAttributes {
    pub safety_hazard_mitigation: u8,
    pub test_complexity: u8,
    pub test_environment_fidelity: u8,
    pub sut_fidelity: u8,
}

impl TestAttributes {
    pub fn new(
        safety_hazard_mitigation: i64,
        test_complexity: i64,
        test_environment_fidelity: i64,
        sut_fidelity: i64,
    ) -> Result<TestAttributes, AttributeError> {
        let check = |name: &'static str, value: i64| -> Result<u8, AttributeError> {
            if (1..=3).contains(&value) {
                Ok(value as u8)
            } else {
                Err(AttributeError::OutOfRange { name, value })
            }
        };
        Ok(TestAttributes {
            safety_hazard_mitigation: check(TEST_ATTRIBUTE_NAMES[0], safety_hazard_mitigation)?,
            test_complexity: check(TEST_ATTRIBUTE_NAMES[1], test_complexity)?,
            test_environment_fidelity: check(TEST_ATTRIBUTE_NAMES[2], test_environment_fidelity)?,
            sut_fidelity: check(TEST_ATTRIBUTE_NAMES[3], sut_fidelity)?,
        })
    }

    pub fn levels(&self) -> [u8; 4] {
        [
            self.safety_hazard_mitigation,
            self.test_complexity,
            self.test_environment_fidelity,
            self.sut_fidelity,
        ]
    }

    /// Total over-qualification of `self` (a capability) relative to a
    /// requirement: the sum of per-attribute level differences.
    pub fn slack_over(&self, requirement: &TestAttributes) -> i64 {
        self.levels()
            .iter()
            .zip(requirement.levels().iter())
            .map(|(c, r)| *c as i64 - *r as i64)
            .sum()
    }
}

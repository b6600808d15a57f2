//! Seeded random taxonomies and documents for property suites and
//! synthetic allocation runs. Every generated document validates against
//! its taxonomy; widened capabilities additionally subsume the document
//! they were widened from.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::expr::{CapabilityExpression, CompareOp};
use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::{Taxonomy, TaxonomyNode};
use crate::model::value::{
    Interval, LeafKind, LeafType, LeafValue, RangeConstraint,
};
use crate::path::NodePath;

const NAME_POOL: [&str; 12] = [
    "zone", "lane", "sensor", "agent", "sun", "rain", "road", "signal", "area", "speed", "load",
    "link",
];

const TEXT_POOL: [&str; 10] = [
    "sweden", "norway", "urban", "rural", "dry", "wet", "day", "night", "gravel", "asphalt",
];

pub struct Synth {
    rng: StdRng,
    counter: usize,
}

impl Synth {
    pub fn new(seed: u64) -> Synth {
        Synth {
            rng: StdRng::seed_from_u64(seed),
            counter: 0,
        }
    }

    fn name(&mut self) -> String {
        let word = NAME_POOL[self.rng.random_range(0..NAME_POOL.len())];
        self.counter += 1;
        format!("{word}_{}", self.counter)
    }

    fn text(&mut self) -> String {
        TEXT_POOL[self.rng.random_range(0..TEXT_POOL.len())].to_string()
    }

    /// A random taxonomy with between 1 and `max_leaves` leaves.
    pub fn taxonomy(&mut self, id: &str, max_leaves: usize) -> Taxonomy {
        let mut budget = self.rng.random_range(1..=max_leaves.max(1));
        let nodes = self.nodes(0, &mut budget);
        let nodes = if nodes.is_empty() {
            let mut one = 1;
            self.nodes(3, &mut one)
        } else {
            nodes
        };
        Taxonomy::new(id, nodes).expect("generated taxonomy is structurally valid")
    }

    fn nodes(&mut self, depth: usize, budget: &mut usize) -> Vec<TaxonomyNode> {
        let mut out = Vec::new();
        let width = self.rng.random_range(1..=4usize);
        for _ in 0..width {
            if *budget == 0 {
                break;
            }
            let make_leaf = depth >= 3 || *budget == 1 || self.rng.random_bool(0.6);
            if make_leaf {
                *budget -= 1;
                out.push(self.leaf());
            } else {
                let children = self.nodes(depth + 1, budget);
                if children.is_empty() {
                    *budget = budget.saturating_sub(1);
                    out.push(self.leaf());
                } else {
                    let name = self.name();
                    out.push(TaxonomyNode::branch(name, children).expect("children checked"));
                }
            }
        }
        out
    }

    fn leaf(&mut self) -> TaxonomyNode {
        let kind = match self.rng.random_range(0..100u32) {
            0..=24 => LeafKind::Real,
            25..=44 => LeafKind::Integer,
            45..=59 => LeafKind::Boolean,
            60..=74 => LeafKind::Text,
            75..=82 => LeafKind::Duration,
            83..=89 => LeafKind::DataSize,
            _ => LeafKind::TextSet,
        };
        let constraint = if kind.is_numeric() && self.rng.random_bool(0.5) {
            let (lower, upper) = match kind {
                LeafKind::Integer => {
                    let lo = self.rng.random_range(-5..=5i64);
                    (lo as f64, (lo + self.rng.random_range(1..=10i64)) as f64)
                }
                LeafKind::DataSize => {
                    let lo = self.rng.random_range(0..=1000i64);
                    (lo as f64, (lo + self.rng.random_range(1..=100_000i64)) as f64)
                }
                _ => {
                    let lo = self.rng.random_range(-1000..=1000i64) as f64 / 10.0;
                    (lo, lo + self.rng.random_range(1..=2000i64) as f64 / 10.0)
                }
            };
            Some(RangeConstraint::new(lower, upper).expect("ordered bounds"))
        } else {
            None
        };
        let unit = if self.rng.random_bool(0.2) {
            Some("unit".to_string())
        } else {
            None
        };
        let required = self.rng.random_bool(0.25);
        let name = self.name();
        TaxonomyNode::leaf(name, LeafType::new(kind, unit, constraint).expect("kind checked"), required)
            .expect("name is valid")
    }

    /// A random requirement assigning every required leaf plus roughly
    /// half of the optional ones.
    pub fn requirement(&mut self, tax: &Taxonomy, id: &str) -> OddDocument {
        self.document(tax, id, Role::Requirement, 0.5, 0.15)
    }

    /// A random expression-free capability, independent of any
    /// requirement; used to exercise both passing and failing verdicts.
    pub fn concrete_capability(&mut self, tax: &Taxonomy, id: &str) -> OddDocument {
        self.document(tax, id, Role::Capability, 0.7, 0.35)
    }

    fn document(
        &mut self,
        tax: &Taxonomy,
        id: &str,
        role: Role,
        optional_p: f64,
        interval_p: f64,
    ) -> OddDocument {
        let mut doc = OddDocument::new(id, role, tax.id()).expect("generated ids are valid");
        for path in tax.leaf_paths() {
            let node = tax.find(&path).expect("path from leaf_paths");
            if !node.required() && !self.rng.random_bool(optional_p) {
                continue;
            }
            let leaf_type = node.leaf_type().expect("leaf");
            let value = self.value_for(leaf_type, interval_p);
            doc.assign(path, value);
        }
        doc
    }

    fn value_for(&mut self, leaf_type: &LeafType, interval_p: f64) -> LeafValue {
        let constraint = leaf_type.constraint();
        match leaf_type.kind() {
            LeafKind::Boolean => LeafValue::Boolean(self.rng.random_bool(0.5)),
            LeafKind::Text => {
                if self.rng.random_bool(interval_p / 2.0) {
                    self.text_set_value()
                } else {
                    LeafValue::Text(self.text())
                }
            }
            LeafKind::TextSet => self.text_set_value(),
            LeafKind::Integer => {
                let (lo, hi) = int_bounds(constraint, -100, 100);
                if self.rng.random_bool(interval_p) {
                    let a = self.rng.random_range(lo..=hi);
                    let b = self.rng.random_range(lo..=hi);
                    LeafValue::Interval(
                        Interval::new(a.min(b) as f64, a.max(b) as f64).expect("ordered"),
                    )
                } else {
                    LeafValue::Integer(self.rng.random_range(lo..=hi))
                }
            }
            LeafKind::Real => {
                let (lo, hi) = real_bounds(constraint, -1000.0, 1000.0);
                if self.rng.random_bool(interval_p) {
                    let a = self.real_in(lo, hi);
                    let b = self.real_in(lo, hi);
                    LeafValue::Interval(Interval::new(a.min(b), a.max(b)).expect("ordered"))
                } else {
                    LeafValue::real(self.real_in(lo, hi))
                }
            }
            LeafKind::Duration => {
                let (lo, hi) = real_bounds(constraint, 0.0, 7200.0);
                LeafValue::duration_seconds(self.real_in(lo, hi))
            }
            LeafKind::DataSize => {
                let (lo, hi) = int_bounds(constraint, 0, 1_000_000);
                LeafValue::DataSize(self.rng.random_range(lo..=hi))
            }
        }
    }

    fn text_set_value(&mut self) -> LeafValue {
        let n = self.rng.random_range(1..=3usize);
        let items: Vec<String> = (0..n).map(|_| self.text()).collect();
        LeafValue::text_set(items)
    }

    /// A real on a 0.1 grid inside [lo, hi].
    fn real_in(&mut self, lo: f64, hi: f64) -> f64 {
        let steps = ((hi - lo) * 10.0).floor().max(0.0) as i64;
        let step = self.rng.random_range(0..=steps);
        crate::model::value::canon_real(lo + step as f64 / 10.0)
    }

    /// A capability that subsumes `source` leaf by leaf: every numeric
    /// value stays or grows, intervals only widen, text sets only gain
    /// members, booleans and texts are preserved (texts may widen into a
    /// covering set). Widening respects the leaf constraints, so the
    /// result still validates.
    pub fn widened_capability(
        &mut self,
        source: &OddDocument,
        tax: &Taxonomy,
        id: &str,
    ) -> OddDocument {
        let mut doc = OddDocument::new(id, Role::Capability, source.taxonomy_id())
            .expect("generated ids are valid");
        for (path, value) in source.assignments() {
            let leaf_type = tax.leaf_type(path).expect("source validates against tax");
            let widened = self.widen_value(value, leaf_type);
            doc.assign(path.clone(), widened);
        }
        doc
    }

    fn widen_value(&mut self, value: &LeafValue, leaf_type: &LeafType) -> LeafValue {
        let constraint = leaf_type.constraint();
        match value {
            LeafValue::Boolean(_) | LeafValue::Text(_) if self.rng.random_bool(0.7) => {
                value.clone()
            }
            LeafValue::Boolean(b) => LeafValue::Boolean(*b),
            LeafValue::Text(s) => {
                // a covering set containing the text
                let mut items = vec![s.clone()];
                for _ in 0..self.rng.random_range(0..=2usize) {
                    items.push(self.text());
                }
                LeafValue::text_set(items)
            }
            LeafValue::TextSet(items) => {
                let mut widened = items.clone();
                for _ in 0..self.rng.random_range(0..=2usize) {
                    widened.insert(self.text());
                }
                LeafValue::TextSet(widened)
            }
            // a scalar capability covers everything at or below it, so a
            // widened scalar stays a scalar: converting it to an interval
            // would silently drop the low side of that coverage
            LeafValue::Integer(i) => {
                let ceiling = constraint.map(|c| c.upper().floor() as i64).unwrap_or(i64::MAX / 2);
                LeafValue::Integer((*i + self.rng.random_range(0..=3)).min(ceiling).max(*i))
            }
            LeafValue::Real(r) => {
                let ceiling = constraint.map(|c| c.upper()).unwrap_or(f64::MAX / 2.0);
                LeafValue::real((*r + self.rng.random_range(0..=100) as f64 / 10.0).min(ceiling).max(*r))
            }
            LeafValue::Duration(d) => {
                let ceiling = constraint.map(|c| c.upper()).unwrap_or(f64::MAX / 2.0);
                LeafValue::duration_seconds(
                    (*d + self.rng.random_range(0..=100) as f64 / 10.0).min(ceiling).max(*d),
                )
            }
            LeafValue::DataSize(n) => {
                let ceiling = constraint.map(|c| c.upper().floor() as i64).unwrap_or(i64::MAX / 2);
                LeafValue::DataSize((*n + self.rng.random_range(0..=10_000)).min(ceiling).max(*n))
            }
            LeafValue::Interval(interval) => {
                let floor = constraint.map(|c| c.lower()).unwrap_or(interval.lower() - 100.0);
                let ceiling = constraint.map(|c| c.upper()).unwrap_or(interval.upper() + 100.0);
                let lower = (interval.lower() - self.rng.random_range(0..=50) as f64 / 10.0)
                    .max(floor)
                    .min(interval.lower());
                let upper = (interval.upper() + self.rng.random_range(0..=50) as f64 / 10.0)
                    .min(ceiling)
                    .max(interval.upper());
                LeafValue::Interval(Interval::new(lower, upper).expect("only widened"))
            }
            LeafValue::Expression(_) => value.clone(),
        }
    }

    /// Wraps some capability leaves in conditionals over the requirement;
    /// used by serialization round-trip suites.
    pub fn conditional_capability(&mut self, tax: &Taxonomy, id: &str) -> OddDocument {
        let base = self.concrete_capability(tax, id);
        let numeric_paths: Vec<NodePath> = tax
            .leaf_paths()
            .into_iter()
            .filter(|p| {
                matches!(
                    tax.leaf_type(p).map(|t| t.kind()),
                    Some(LeafKind::Real | LeafKind::Integer)
                )
            })
            .collect();
        if numeric_paths.is_empty() {
            return base;
        }
        let mut doc = base.clone();
        for (path, value) in base.assignments() {
            if !self.rng.random_bool(0.3) {
                continue;
            }
            let leaf_type = tax.leaf_type(path).expect("assigned paths are leaves");
            let probe = numeric_paths[self.rng.random_range(0..numeric_paths.len())].clone();
            let threshold = self.rng.random_range(-1000..=1000i64) as f64 / 10.0;
            let alternative = self.value_for(leaf_type, 0.0);
            let expr = CapabilityExpression::IfThenElse {
                condition: Box::new(CapabilityExpression::Compare {
                    op: CompareOp::Le,
                    left: Box::new(CapabilityExpression::ReqRef(probe)),
                    right: Box::new(CapabilityExpression::Literal(LeafValue::real(threshold))),
                }),
                then_branch: Box::new(CapabilityExpression::Literal(value.clone())),
                else_branch: Box::new(CapabilityExpression::Literal(alternative)),
            };
            doc.assign(path.clone(), LeafValue::expression(expr));
        }
        doc
    }
}

fn int_bounds(constraint: Option<&RangeConstraint>, lo: i64, hi: i64) -> (i64, i64) {
    match constraint {
        Some(c) => (c.lower().ceil() as i64, c.upper().floor() as i64),
        None => (lo, hi),
    }
}

fn real_bounds(constraint: Option<&RangeConstraint>, lo: f64, hi: f64) -> (f64, f64) {
    match constraint {
        Some(c) => (c.lower(), c.upper()),
        None => (lo, hi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate::validate_document;

    #[test]
    fn generated_documents_validate() {
        let mut synth = Synth::new(7);
        for round in 0..50 {
            let tax = synth.taxonomy("t", 30);
            assert!(tax.leaf_paths().len() <= 30);
            let req = synth.requirement(&tax, "req");
            assert_eq!(validate_document(&req, &tax), [], "round {round} requirement");
            let cap = synth.concrete_capability(&tax, "cap");
            assert_eq!(validate_document(&cap, &tax), [], "round {round} capability");
            let cond = synth.conditional_capability(&tax, "cond");
            assert_eq!(validate_document(&cond, &tax), [], "round {round} conditional");
        }
    }

    #[test]
    fn widened_capability_subsumes_its_source() {
        let mut synth = Synth::new(11);
        for round in 0..50 {
            let tax = synth.taxonomy("t", 20);
            let req = synth.requirement(&tax, "req");
            let cap = synth.widened_capability(&req, &tax, "cap");
            assert_eq!(validate_document(&cap, &tax), [], "round {round}");
            let verdict = crate::compare::generic_compare(&cap, &req, &tax).unwrap();
            assert!(
                verdict.within,
                "round {round}: widened capability must subsume the source\n{:#?}",
                verdict.leaf_verdicts.iter().filter(|v| !v.pass).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let mut a = Synth::new(42);
        let mut b = Synth::new(42);
        let ta = a.taxonomy("t", 25);
        let tb = b.taxonomy("t", 25);
        assert_eq!(ta, tb);
        assert_eq!(a.requirement(&ta, "r"), b.requirement(&tb, "r"));
    }
}

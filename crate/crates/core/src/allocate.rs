//! Test case allocation: run the containment check across a suite of
//! requirements and a registry of environments, rank the feasible
//! environments, and surface unallocatable test cases.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::compare::{generic_compare, CompareError, ComparisonVerdict};
use crate::model::document::{OddDocument, Role};
use crate::model::taxonomy::{RegistryError, TaxonomyRegistry};
use crate::model::value::{is_test_attribute, LeafValue};
use crate::path::is_valid_name;

/// A test environment: an id, a display name, and the capability
/// document describing what it provides.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub id: String,
    pub name: String,
    pub capability: OddDocument,
}

impl Environment {
    pub fn new(id: impl Into<String>, capability: OddDocument) -> Result<Environment, AllocateError> {
        let id = id.into();
        if !is_valid_name(&id) {
            return Err(AllocateError::InvalidEnvironmentId(id));
        }
        Ok(Environment {
            name: id.clone(),
            id,
            capability,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Environment {
        self.name = name.into();
        self
    }
}

/// A test case with no feasible environment, with the failing leaves per
/// environment.
#[derive(Debug, Clone, PartialEq)]
pub struct UnallocatedCase {
    pub test_case: String,
    /// environment id -> "path: message" lines for each failing leaf
    pub failures: BTreeMap<String, Vec<String>>,
}

/// Feasibility matrix and ranking for a suite of test cases against a
/// set of environments.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationReport {
    /// (test case id, environment id) -> full comparison verdict
    pub matrix: BTreeMap<(String, String), ComparisonVerdict>,
    /// test case id -> feasible environment ids, least over-qualified first
    pub feasible: BTreeMap<String, Vec<String>>,
    pub unallocated: Vec<UnallocatedCase>,
    /// (id, display name) of every environment, sorted by id
    pub environments: Vec<(String, String)>,
    /// test case ids, sorted
    pub test_cases: Vec<String>,
}

impl AllocationReport {
    /// True when every test case has at least one feasible environment.
    pub fn fully_allocated(&self) -> bool {
        self.unallocated.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AllocateError {
    #[error("duplicate test case id {0:?}")]
    DuplicateTestCase(String),
    #[error("duplicate environment id {0:?}")]
    DuplicateEnvironment(String),
    #[error("invalid environment id {0:?}")]
    InvalidEnvironmentId(String),
    #[error("document {id:?} has role {found}, expected {expected}")]
    RoleMismatch {
        id: String,
        expected: Role,
        found: Role,
    },
    #[error("comparing test case {test_case:?} against environment {environment:?}: {source}")]
    Comparison {
        test_case: String,
        environment: String,
        source: CompareError,
    },
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

/// Runs the containment check over the full cross product and assembles
/// the report. Output is deterministic for identical inputs regardless
/// of input order.
pub fn allocate(
    test_cases: &[OddDocument],
    environments: &[Environment],
    registry: &TaxonomyRegistry,
) -> Result<AllocationReport, AllocateError> {
    let mut case_ids = BTreeSet::new();
    for case in test_cases {
        if case.role() != Role::Requirement {
            return Err(AllocateError::RoleMismatch {
                id: case.id().to_string(),
                expected: Role::Requirement,
                found: case.role(),
            });
        }
        if !case_ids.insert(case.id().to_string()) {
            return Err(AllocateError::DuplicateTestCase(case.id().to_string()));
        }
    }
    let mut env_ids = BTreeSet::new();
    for env in environments {
        if env.capability.role() != Role::Capability {
            return Err(AllocateError::RoleMismatch {
                id: env.capability.id().to_string(),
                expected: Role::Capability,
                found: env.capability.role(),
            });
        }
        if !env_ids.insert(env.id.clone()) {
            return Err(AllocateError::DuplicateEnvironment(env.id.clone()));
        }
    }

    let mut sorted_cases: Vec<&OddDocument> = test_cases.iter().collect();
    sorted_cases.sort_by_key(|c| c.id().to_string());
    let mut sorted_envs: Vec<&Environment> = environments.iter().collect();
    sorted_envs.sort_by_key(|e| e.id.clone());

    let mut matrix = BTreeMap::new();
    let mut feasible = BTreeMap::new();
    let mut unallocated = Vec::new();

    for case in &sorted_cases {
        let mut case_verdicts: BTreeMap<String, &ComparisonVerdict> = BTreeMap::new();
        for env in &sorted_envs {
            let taxonomy =
                registry.resolve_common(case.taxonomy_id(), env.capability.taxonomy_id())?;
            let verdict = generic_compare(&env.capability, case, taxonomy).map_err(|source| {
                AllocateError::Comparison {
                    test_case: case.id().to_string(),
                    environment: env.id.clone(),
                    source,
                }
            })?;
            matrix.insert((case.id().to_string(), env.id.clone()), verdict);
        }
        for env in &sorted_envs {
            let verdict = &matrix[&(case.id().to_string(), env.id.clone())];
            if verdict.within {
                case_verdicts.insert(env.id.clone(), verdict);
            }
        }
        if case_verdicts.is_empty() {
            let mut failures = BTreeMap::new();
            for env in &sorted_envs {
                let verdict = &matrix[&(case.id().to_string(), env.id.clone())];
                let lines: Vec<String> = verdict
                    .leaf_verdicts
                    .iter()
                    .filter(|v| !v.pass)
                    .map(|v| format!("{}: {}", v.path, v.message))
                    .collect();
                failures.insert(env.id.clone(), lines);
            }
            unallocated.push(UnallocatedCase {
                test_case: case.id().to_string(),
                failures,
            });
        } else {
            feasible.insert(case.id().to_string(), rank_feasible(&case_verdicts));
        }
    }

    Ok(AllocationReport {
        matrix,
        feasible,
        unallocated,
        environments: sorted_envs
            .iter()
            .map(|e| (e.id.clone(), e.name.clone()))
            .collect(),
        test_cases: sorted_cases.iter().map(|c| c.id().to_string()).collect(),
    })
}

/// Orders feasible environments for one test case: ascending by
/// attribute slack (the sum over the four test attributes of capability
/// level minus requirement level), ties broken by environment id. The
/// least over-qualified environment comes first.
pub fn rank_feasible(verdicts: &BTreeMap<String, &ComparisonVerdict>) -> Vec<String> {
    let mut ranked: Vec<(i64, &String)> = verdicts
        .iter()
        .map(|(id, verdict)| (attribute_slack(verdict), id))
        .collect();
    ranked.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    ranked.into_iter().map(|(_, id)| id.clone()).collect()
}

/// Slack read off the per-leaf verdicts of the four attribute paths.
fn attribute_slack(verdict: &ComparisonVerdict) -> i64 {
    verdict
        .leaf_verdicts
        .iter()
        .filter(|v| is_test_attribute(&v.path))
        .map(|v| {
            let req = match &v.requirement {
                LeafValue::Integer(level) => *level,
                _ => return 0,
            };
            let cap = match &v.capability {
                Some(LeafValue::Integer(level)) => *level,
                Some(LeafValue::Interval(interval)) => interval.upper().floor() as i64,
                _ => return 0,
            };
            cap - req
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::taxonomy::TaxonomyRegistry;
    use crate::model::value::TEST_ATTRIBUTE_NAMES;
    use crate::parse::taxonomy::parse_taxonomies;
    use crate::path::NodePath;

    fn registry() -> TaxonomyRegistry {
        let source = "
taxonomy ext_odd {
  branch env {
    leaf azimuth: real range 0.0..360.0
  }
  leaf safety_hazard_mitigation: integer range 1..3 required
  leaf test_complexity: integer range 1..3 required
  leaf test_environment_fidelity: integer range 1..3 required
  leaf sut_fidelity: integer range 1..3 required
}
";
        let mut registry = TaxonomyRegistry::new();
        for t in parse_taxonomies(source, &registry).unwrap() {
            registry.insert(t).unwrap();
        }
        registry
    }

    fn doc(id: &str, role: Role, attrs: [i64; 4]) -> OddDocument {
        let mut doc = OddDocument::new(id, role, "ext_odd").unwrap();
        for (name, level) in TEST_ATTRIBUTE_NAMES.iter().zip(attrs) {
            doc.assign(NodePath::from_name(name), LeafValue::Integer(level));
        }
        doc
    }

    #[test]
    fn empty_suite_yields_empty_report() {
        let registry = registry();
        let envs = vec![
            Environment::new("a", doc("a", Role::Capability, [3, 3, 3, 3])).unwrap(),
        ];
        let report = allocate(&[], &envs, &registry).unwrap();
        assert!(report.matrix.is_empty());
        assert!(report.feasible.is_empty());
        assert!(report.unallocated.is_empty());
        assert!(report.fully_allocated());
    }

    #[test]
    fn no_environments_leaves_case_unallocated_with_empty_failures() {
        let registry = registry();
        let cases = vec![doc("req", Role::Requirement, [1, 1, 1, 1])];
        let report = allocate(&cases, &[], &registry).unwrap();
        assert!(report.matrix.is_empty());
        assert!(report.feasible.is_empty());
        assert_eq!(report.unallocated.len(), 1);
        assert_eq!(report.unallocated[0].test_case, "req");
        assert!(report.unallocated[0].failures.is_empty());
        assert!(!report.fully_allocated());
    }

    #[test]
    fn identical_capable_environments_tie_break_by_id() {
        let registry = registry();
        let cases = vec![doc("req", Role::Requirement, [1, 1, 1, 1])];
        let cap = doc("cap", Role::Capability, [2, 2, 2, 2]);
        let envs = vec![
            Environment::new("track", cap.clone()).unwrap(),
            Environment::new("hil", cap).unwrap(),
        ];
        let report = allocate(&cases, &envs, &registry).unwrap();
        assert_eq!(report.feasible["req"], vec!["hil", "track"]);

        // registration order does not matter
        let mut reversed = envs;
        reversed.reverse();
        let report2 = allocate(&cases, &reversed, &registry).unwrap();
        assert_eq!(report, report2);
    }

    #[test]
    fn ranking_prefers_least_slack() {
        let registry = registry();
        let cases = vec![doc("req", Role::Requirement, [1, 1, 1, 1])];
        let envs = vec![
            Environment::new("oversized", doc("o", Role::Capability, [3, 3, 2, 2])).unwrap(),
            Environment::new("snug", doc("s", Role::Capability, [1, 1, 1, 1])).unwrap(),
        ];
        let report = allocate(&cases, &envs, &registry).unwrap();
        assert_eq!(report.feasible["req"], vec!["snug", "oversized"]);
    }

    #[test]
    fn infeasible_case_reports_failing_leaves_per_environment() {
        let registry = registry();
        let cases = vec![doc("req", Role::Requirement, [3, 3, 3, 3])];
        let envs = vec![
            Environment::new("low", doc("low", Role::Capability, [1, 1, 1, 1])).unwrap(),
        ];
        let report = allocate(&cases, &envs, &registry).unwrap();
        assert_eq!(report.unallocated.len(), 1);
        let failures = &report.unallocated[0].failures["low"];
        assert_eq!(failures.len(), 4);
        assert!(failures[0].starts_with("safety_hazard_mitigation:"));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let registry = registry();
        let cases = vec![
            doc("req", Role::Requirement, [1, 1, 1, 1]),
            doc("req", Role::Requirement, [1, 1, 1, 1]),
        ];
        assert!(matches!(
            allocate(&cases, &[], &registry),
            Err(AllocateError::DuplicateTestCase(_))
        ));
        let cap = doc("cap", Role::Capability, [1, 1, 1, 1]);
        let envs = vec![
            Environment::new("e", cap.clone()).unwrap(),
            Environment::new("e", cap).unwrap(),
        ];
        assert!(matches!(
            allocate(&[], &envs, &registry),
            Err(AllocateError::DuplicateEnvironment(_))
        ));
    }

    #[test]
    fn role_mixups_are_rejected() {
        let registry = registry();
        let cap_in_req_position = vec![doc("x", Role::Capability, [1, 1, 1, 1])];
        assert!(matches!(
            allocate(&cap_in_req_position, &[], &registry),
            Err(AllocateError::RoleMismatch { .. })
        ));
    }

    #[test]
    fn rank_feasible_slack_arithmetic() {
        let registry = registry();
        let req = doc("req", Role::Requirement, [1, 1, 1, 1]);
        let tax = registry.get("ext_odd").unwrap();
        let snug = generic_compare(
            &doc("a", Role::Capability, [1, 1, 1, 1]),
            &req,
            tax,
        )
        .unwrap();
        let oversized = generic_compare(
            &doc("b", Role::Capability, [3, 3, 2, 2]),
            &req,
            tax,
        )
        .unwrap();
        let mut verdicts: BTreeMap<String, &ComparisonVerdict> = BTreeMap::new();
        verdicts.insert("a".to_string(), &snug);
        verdicts.insert("b".to_string(), &oversized);
        assert_eq!(rank_feasible(&verdicts), vec!["a", "b"]);
        assert_eq!(attribute_slack(&snug), 0);
        assert_eq!(attribute_slack(&oversized), 6);
    }

    #[test]
    fn single_feasible_environment_is_returned_alone() {
        let registry = registry();
        let req = doc("req", Role::Requirement, [1, 1, 1, 1]);
        let tax = registry.get("ext_odd").unwrap();
        let verdict = generic_compare(
            &doc("only", Role::Capability, [2, 2, 2, 2]),
            &req,
            tax,
        )
        .unwrap();
        let mut verdicts: BTreeMap<String, &ComparisonVerdict> = BTreeMap::new();
        verdicts.insert("only".to_string(), &verdict);
        assert_eq!(rank_feasible(&verdicts), vec!["only"]);
    }
}

//! Validation reports shared by every validator in the crate.
//!
//! A report separates *structural* problems (the input does not even
//! describe the intended kind of object: dangling identifiers, a `k` that is
//! not a self-map of `h`, ...) from *axiom* violations (a well-formed table
//! that fails a law). Both lists are kept in canonical order so reports from
//! different runs compare byte-for-byte.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    // structural
    DuplicateId,
    DanglingId,
    MissingUnit,
    DuplicateComposition,
    KDomain,
    KNotInvolutive,
    // groupoid axioms
    CompositionDomain,
    ProductEndpoints,
    UnitEndpoints,
    LeftUnit,
    RightUnit,
    InverseEndpoints,
    InverseLaw,
    Associativity,
    // delta axioms
    HNotInverseClosed,
    DerivedPairNotComposable,
    DeltaIdentity,
    // morphisms
    MorphismEndpoints,
    MorphismUnit,
    MorphismInverse,
    MorphismComposition,
    MorphismH,
    MorphismK,
    // topological models
    NotSubgroupoid,
    LongArcInA,
    LongArcsNotInverseClosed,
    EndpointCondition,
    // short arcs and the quotient
    ShortArcNotUnique,
    NonParallelIdentification,
    KNotWellDefined,
    KInverseRelation,
    ArcEquation,
    ArcEndpointMap,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    /// Identifiers of the elements (or objects) exhibiting the problem.
    pub witness: Vec<String>,
    pub message: String,
}

impl Issue {
    pub fn new(kind: IssueKind, witness: Vec<String>, message: impl Into<String>) -> Self {
        Issue { kind, witness, message: message.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [{}]: {}", self.kind, self.witness.join(", "), self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub structural: Vec<Issue>,
    pub violations: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.structural.is_empty() && self.violations.is_empty()
    }

    pub fn is_structurally_sound(&self) -> bool {
        self.structural.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.structural.iter().chain(&self.violations).any(|i| i.kind == kind)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.structural.extend(other.structural);
        self.violations.extend(other.violations);
    }

    /// Sorts and deduplicates both lists.
    pub fn canonicalize(&mut self) {
        self.structural.sort();
        self.structural.dedup();
        self.violations.sort();
        self.violations.dedup();
    }

    pub fn lines(&self) -> Vec<String> {
        self.structural
            .iter()
            .map(|i| format!("structural: {i}"))
            .chain(self.violations.iter().map(|i| format!("violation: {i}")))
            .collect()
    }
}

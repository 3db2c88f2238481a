//! Digraphs, the constructive loop lemma and polymorphism search.

mod digraph;
mod instances;
mod lab;
mod lemma;
mod poly;

pub use digraph::{
    brute_loop, canonical_code, compose_power, digraph_from_mask, find_odd_cycle, graph_class, is_closed_walk, Digraph,
    GraphClass,
};
pub use instances::{nu_closure_instance, random_nu, NuInstance};
pub use lab::{
    check_loop_conjecture, conjecture_candidates, probe, Candidate, CandidateSet, LabEntry, LabMode, LabReport,
    ProbeOutcome, EXHAUSTIVE_MAX_VERTICES, SAMPLE_MAX_VERTICES,
};
pub use lemma::{
    find_loop, find_loop_constructive, validate_preconditions, Frame, LoopCertificate, LoopMode, LoopOptions, Phase,
    PreconditionReport, Role, Violation,
};
pub use poly::{find_polymorphism, BudgetExceeded, PolymorphismOutcome, ShapeConstraints};

use crate::algebra::Elem;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoopError {
    #[error("relation is not symmetric: ({a},{b}) has no reverse")]
    NotSymmetric { a: Elem, b: Elem },
    #[error("universe size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("hypothesis fails at frame {frame}: {violation}")]
    Precondition { frame: usize, violation: Violation },
    #[error("{} mode hypothesis fails: {violation}", mode.label())]
    Mode { mode: LoopMode, violation: Violation },
    #[error("search over size {size} and arity {arity} is out of range")]
    SearchSize { size: usize, arity: usize },
    #[error("{requested} vertices requested, at most {limit} supported")]
    TooManyVertices { requested: usize, limit: usize },
}

//! Probing whether small smooth digraphs of algebraic length one can carry
//! a near unanimity polymorphism without having a loop.

use alloc::vec::Vec;
use core::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::digraph::{canonical_code, digraph_from_mask, graph_class, Digraph, GraphClass};
use super::poly::{find_polymorphism, PolymorphismOutcome, ShapeConstraints};
use super::LoopError;
use crate::algebra::OperationTable;
use crate::clock::Clock;

/// Largest vertex count for exhaustive enumeration.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 5;
/// Largest vertex count for sampling.
pub const SAMPLE_MAX_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabMode {
    /// All loopless digraphs up to isomorphism.
    Exhaustive,
    /// `count` qualifying digraphs on exactly `max_vertices` vertices,
    /// drawn with independent fair coins per edge.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub digraph: Digraph,
    pub class: GraphClass,
    pub code: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    /// Digraphs looked at (isomorphism classes when exhaustive, draws when sampling).
    pub examined: usize,
    /// Examined digraphs failing smoothness, algebraic length one or looplessness.
    pub filtered: usize,
}

fn qualifies(class: &GraphClass) -> bool {
    class.smooth && class.algebraic_length_one && !class.has_loop
}

/// Loopless, smooth digraphs of algebraic length one, sorted by vertex
/// count and canonical code.
pub fn conjecture_candidates(max_vertices: usize, mode: LabMode) -> Result<CandidateSet, LoopError> {
    let mut set = CandidateSet::default();
    match mode {
        LabMode::Exhaustive => {
            if max_vertices > EXHAUSTIVE_MAX_VERTICES {
                return Err(LoopError::TooManyVertices {
                    requested: max_vertices,
                    limit: EXHAUSTIVE_MAX_VERTICES,
                });
            }
            for n in 1..=max_vertices {
                let mut seen = crate::HashSet::new();
                for mask in 0..1u64 << (n * (n - 1)) {
                    let d = digraph_from_mask(n, mask);
                    let code = canonical_code(&d);
                    if !seen.insert(code) {
                        continue;
                    }
                    set.examined += 1;
                    let class = graph_class(&d);
                    if qualifies(&class) {
                        set.candidates.push(Candidate { digraph: d, class, code });
                    } else {
                        set.filtered += 1;
                    }
                }
            }
        }
        LabMode::Sample { count, seed } => {
            if max_vertices > SAMPLE_MAX_VERTICES || max_vertices == 0 {
                return Err(LoopError::TooManyVertices {
                    requested: max_vertices,
                    limit: SAMPLE_MAX_VERTICES,
                });
            }
            let n = max_vertices;
            let bits = n * (n - 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let attempts = count.saturating_mul(1000);
            while set.candidates.len() < count && set.examined < attempts {
                let mask = if bits == 0 { 0 } else { rng.random::<u64>() >> (64 - bits) };
                let d = digraph_from_mask(n, mask);
                set.examined += 1;
                let class = graph_class(&d);
                if qualifies(&class) {
                    let code = canonical_code(&d);
                    set.candidates.push(Candidate { digraph: d, class, code });
                } else {
                    set.filtered += 1;
                }
            }
        }
    }
    set.candidates.sort_by_key(|c| (c.digraph.size(), c.code));
    Ok(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// A near unanimity polymorphism: a counterexample.
    Polymorphism(OperationTable),
    None,
    Inconclusive { nodes: u64 },
    /// The digraph has a loop and was not searched.
    Filtered,
}

/// Searches one digraph for an idempotent near unanimity polymorphism.
pub fn probe(d: &Digraph, arity: usize, budget: u64) -> Result<ProbeOutcome, LoopError> {
    if !d.loops().is_empty() {
        return Ok(ProbeOutcome::Filtered);
    }
    Ok(match find_polymorphism(d, arity, ShapeConstraints::NU, budget)? {
        PolymorphismOutcome::Found(op) => ProbeOutcome::Polymorphism(op),
        PolymorphismOutcome::None => ProbeOutcome::None,
        PolymorphismOutcome::BudgetExceeded(b) => ProbeOutcome::Inconclusive { nodes: b.nodes },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabEntry {
    pub candidate: Candidate,
    pub outcome: ProbeOutcome,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabReport {
    pub max_vertices: usize,
    pub arity: usize,
    pub mode: LabMode,
    pub budget: u64,
    pub examined: usize,
    pub filtered: usize,
    pub entries: Vec<LabEntry>,
}

impl LabReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &LabEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, ProbeOutcome::Polymorphism(_)))
    }

    pub fn inconclusive(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, ProbeOutcome::Inconclusive { .. }))
            .count()
    }
}

/// Runs [`probe`] on every candidate, sequentially.
pub fn check_loop_conjecture<C: Clock>(
    max_vertices: usize,
    arity: usize,
    mode: LabMode,
    budget: u64,
    clock: C,
) -> Result<LabReport, LoopError> {
    let set = conjecture_candidates(max_vertices, mode)?;
    let mut entries = Vec::with_capacity(set.candidates.len());
    for candidate in set.candidates {
        let start = clock.now();
        let outcome = probe(&candidate.digraph, arity, budget)?;
        entries.push(LabEntry {
            candidate,
            outcome,
            elapsed: clock.now().saturating_sub(start),
        });
    }
    Ok(LabReport {
        max_vertices,
        arity,
        mode,
        budget,
        examined: set.examined,
        filtered: set.filtered,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Relation;
    use crate::clock::NoClock;

    #[test]
    fn three_vertices_have_no_counterexample() {
        let report = check_loop_conjecture(3, 3, LabMode::Exhaustive, 100_000, NoClock).unwrap();
        assert!(!report.entries.is_empty());
        assert_eq!(report.counterexamples().count(), 0);
        assert_eq!(report.inconclusive(), 0);
    }

    #[test]
    fn looped_digraph_filtered() {
        let d = Relation::from_edges(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(probe(&d, 3, 10).unwrap(), ProbeOutcome::Filtered);
    }

    #[test]
    fn sampling_is_deterministic() {
        let mode = LabMode::Sample { count: 20, seed: 7 };
        let a = conjecture_candidates(4, mode).unwrap();
        let b = conjecture_candidates(4, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.candidates.len(), 20);
    }
}

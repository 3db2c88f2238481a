//! Finite algebras satisfying one condition but not another.
//!
//! Candidates have a single idempotent operation `f`. A condition holds
//! in a candidate iff some assignment of its symbols to term operations
//! of matching arity satisfies it, and term operations of a given arity
//! are exactly the members of the clone slice, so scanning the slices
//! decides the question.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    extract_witness, samples, satisfies, table_len, term_clone_slice, AlgebraError, ClosureOptions, Elem,
    FiniteAlgebra, OperationTable, WitnessedClosure,
};
use crate::term::{EquationSystem, Name, TermFn};
use crate::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountermodelOptions {
    pub max_size: usize,
    /// Arity of the candidate operation; defaults to the largest arity of
    /// the hypotheses (at least 2).
    pub op_arity: Option<usize>,
    /// Random candidates per universe size above 2.
    pub samples: usize,
    /// Limit on assignments tried, over all candidates.
    pub work_budget: usize,
    pub seed: u64,
    pub closure: ClosureOptions,
}

impl Default for CountermodelOptions {
    fn default() -> Self {
        CountermodelOptions {
            max_size: 2,
            op_arity: None,
            samples: 100,
            work_budget: 1_000_000,
            seed: 0,
            closure: ClosureOptions {
                cap: 100_000,
                ..ClosureOptions::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub algebra: FiniteAlgebra,
    /// Terms over `f` satisfying the hypotheses.
    pub hypothesis_binding: Vec<(Name, TermFn)>,
    /// Assignments of the goal symbols ruled out.
    pub goal_assignments: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountermodelOutcome {
    Found(Countermodel),
    /// Every candidate was decided and none is a countermodel.
    None { examined: usize },
    /// Some candidates were left undecided by the budgets.
    Inconclusive { examined: usize, undecided: usize },
}

/// Idempotent operations of the given arity on two elements, in order of
/// the free cells read as a binary number (first cell most significant).
fn boolean_idempotent(arity: usize) -> Option<impl Iterator<Item = OperationTable>> {
    let cells = table_len(2, arity)?;
    let free = cells - 2;
    if free > 24 {
        return None;
    }
    Some((0..1u64 << free).map(move |mask| {
        let mut bit = free;
        let table: Vec<Elem> = (0..cells)
            .map(|i| {
                if i == 0 {
                    0
                } else if i == cells - 1 {
                    1
                } else {
                    bit -= 1;
                    (mask >> bit & 1) as Elem
                }
            })
            .collect();
        OperationTable::new(2, arity, table).expect("entries are bits")
    }))
}

fn random_idempotent(size: usize, arity: usize, rng: &mut ChaCha8Rng) -> OperationTable {
    OperationTable::from_fn(size, arity, |a| {
        if a.iter().all(|&v| v == a[0]) {
            a[0]
        } else {
            rng.random_range(0..size as Elem)
        }
    })
}

enum Search {
    Found(Vec<usize>),
    Exhausted(usize),
    Budget,
}

/// Looks for slice members satisfying `sys`, symbol by symbol.
fn search(
    alg: &FiniteAlgebra,
    sys: &EquationSystem,
    slices: &HashMap<usize, WitnessedClosure>,
    work: &mut usize,
) -> Result<Search, AlgebraError> {
    let symbols = sys.used_symbols();
    let sizes: Vec<usize> = symbols.iter().map(|(_, n)| slices[n].len()).collect();
    let mut choice = alloc::vec![0usize; symbols.len()];
    let mut tried = 0;
    loop {
        if *work == 0 {
            return Ok(Search::Budget);
        }
        *work -= 1;
        tried += 1;
        let mut candidate = FiniteAlgebra::new(alg.size())?;
        for ((s, n), &c) in symbols.iter().zip(&choice) {
            let t = OperationTable::new(alg.size(), *n, slices[n].element(c).to_vec())?;
            candidate.add_op(s, t)?;
        }
        if satisfies(&candidate, sys, &[])? {
            return Ok(Search::Found(choice));
        }
        // Odometer over the product of the slices.
        let mut i = symbols.len();
        loop {
            if i == 0 {
                return Ok(Search::Exhausted(tried));
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < sizes[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Searches algebras with one idempotent operation `f` on at most
/// `max_size` elements (all of them on two elements, `samples` seeded
/// random ones on larger universes) for one satisfying `hypotheses` but
/// not `goal`.
pub fn find_countermodel(
    hypotheses: &EquationSystem,
    goal: &EquationSystem,
    options: &CountermodelOptions,
) -> Result<CountermodelOutcome, AlgebraError> {
    let hyp_arity = hypotheses.used_symbols().iter().map(|(_, n)| *n).max().unwrap_or(2);
    let arity = options.op_arity.unwrap_or(hyp_arity.max(2));
    let mut arities: Vec<usize> = hypotheses
        .used_symbols()
        .iter()
        .chain(goal.used_symbols().iter())
        .map(|(_, n)| *n)
        .collect();
    arities.sort_unstable();
    arities.dedup();

    let mut work = options.work_budget;
    let (mut examined, mut undecided) = (0, 0);
    for size in 2..=options.max_size {
        let candidates: Vec<OperationTable> = match (size, boolean_idempotent(arity)) {
            (2, Some(all)) => all.collect(),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ (size as u64).rotate_left(32));
                (0..options.samples).map(|_| random_idempotent(size, arity, &mut rng)).collect()
            }
        };
        for op in candidates {
            examined += 1;
            let alg = samples::algebra(size, "f", op);
            let mut slices = HashMap::new();
            let mut complete = true;
            for &n in &arities {
                let slice = term_clone_slice(&alg, &[], n, &options.closure)?;
                complete &= slice.is_complete();
                slices.insert(n, slice);
            }
            if !complete {
                undecided += 1;
                continue;
            }
            let hyp = match search(&alg, hypotheses, &slices, &mut work)? {
                Search::Found(c) => c,
                Search::Exhausted(_) => continue,
                Search::Budget => {
                    undecided += 1;
                    continue;
                }
            };
            match search(&alg, goal, &slices, &mut work)? {
                Search::Found(_) => {}
                Search::Budget => undecided += 1,
                Search::Exhausted(tried) => {
                    let mut binding = Vec::new();
                    for ((s, n), c) in hypotheses.used_symbols().into_iter().zip(hyp) {
                        binding.push((s, extract_witness(&slices[&n], c)?.with_params("x")));
                    }
                    return Ok(CountermodelOutcome::Found(Countermodel {
                        algebra: alg,
                        hypothesis_binding: binding,
                        goal_assignments: tried,
                    }));
                }
            }
        }
    }
    Ok(if undecided == 0 {
        CountermodelOutcome::None { examined }
    } else {
        CountermodelOutcome::Inconclusive { examined, undecided }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::builtin_system;

    #[test]
    fn boolean_enumeration() {
        let all: Vec<_> = boolean_idempotent(3).unwrap().collect();
        assert_eq!(all.len(), 64);
        assert!(all.iter().all(|t| t.is_idempotent()));
        assert!(all.contains(&samples::xor3()));
    }

    #[test]
    fn maltsev_without_nu() {
        let m = builtin_system("maltsev", None).unwrap();
        let nu = builtin_system("nu", Some(3)).unwrap();
        let CountermodelOutcome::Found(c) = find_countermodel(&m, &nu, &CountermodelOptions::default()).unwrap() else {
            panic!("expected a countermodel");
        };
        assert_eq!(c.algebra.op("f"), Some(&samples::xor3()));
        assert_eq!(c.goal_assignments, 4);
        assert!(satisfies(&c.algebra, &m, &c.hypothesis_binding).unwrap());
    }

    #[test]
    fn maltsev_gives_wnu_on_two_elements() {
        let m = builtin_system("maltsev", None).unwrap();
        let w = builtin_system("wnu", Some(3)).unwrap();
        assert!(matches!(
            find_countermodel(&m, &w, &CountermodelOptions::default()).unwrap(),
            CountermodelOutcome::None { .. }
        ));
    }

    #[test]
    fn condition_implies_itself() {
        let m = builtin_system("maltsev", None).unwrap();
        assert!(matches!(
            find_countermodel(&m, &m, &CountermodelOptions::default()).unwrap(),
            CountermodelOutcome::None { .. }
        ));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let m = builtin_system("maltsev", None).unwrap();
        let w = builtin_system("wnu", Some(3)).unwrap();
        let options = CountermodelOptions {
            work_budget: 10,
            ..CountermodelOptions::default()
        };
        assert!(matches!(
            find_countermodel(&m, &w, &options).unwrap(),
            CountermodelOutcome::Inconclusive { .. }
        ));
    }
}

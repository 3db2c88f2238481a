//! Searches inside finite realizations of free algebras: the closure of the
//! projections of `A^(A^k)` stands for the free algebra on `k` generators
//! in the variety of `A`, and subpowers of it are searched for a witness.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::{system_failure, ForgeError, SynthesisOptions, SynthesisResult, SynthesisStats, SynthesisStatus};
use crate::algebra::{
    check_shape, extract_witness, generate_closure, projection_generators, ClosureStatus, Elem, FiniteAlgebra, Model,
    OperationTable, ShapeKind, WitnessedClosure,
};
use crate::term::{builtin_system, canonical_columns, double_loop_system, name, EquationSystem, Name, TermFn, XY};

struct Search {
    closure: WitnessedClosure,
    free_size: usize,
}

/// Closes the tuples of free generators described by `blocks` (each block
/// lists generator indices, one per coordinate block) under `ops`.
fn search(
    ops: &[(Name, &OperationTable)],
    size: usize,
    vars: usize,
    blocks: &[Vec<usize>],
    target: &dyn Fn(&[Elem]) -> bool,
    options: &SynthesisOptions<'_>,
) -> Result<Search, ForgeError> {
    let proj = projection_generators(size, vars)?;
    let width = proj[0].len();
    let free = generate_closure(ops, width, &proj, &options.closure, None)?;
    let gens: Vec<Vec<Elem>> = blocks
        .iter()
        .map(|b| b.iter().flat_map(|&v| proj[v].iter().copied()).collect())
        .collect();
    let closure = generate_closure(ops, width * blocks[0].len(), &gens, &options.closure, Some(target))?;
    Ok(Search {
        closure,
        free_size: free.len(),
    })
}

fn chunks_equal(t: &[Elem], parts: usize) -> bool {
    let w = t.len() / parts;
    (1..parts).all(|p| t[..w] == t[p * w..(p + 1) * w])
}

fn conclude(
    alg: &FiniteAlgebra,
    run: Search,
    symbol: &str,
    auxiliary: Vec<(Name, TermFn)>,
    sys: &EquationSystem,
    start: core::time::Duration,
    options: &SynthesisOptions<'_>,
) -> Result<SynthesisResult, ForgeError> {
    let c = &run.closure;
    let mut result = SynthesisResult {
        status: SynthesisStatus::Inconclusive,
        symbol: name(symbol),
        term: None,
        auxiliary,
        verified: false,
        stats: SynthesisStats {
            closure_sizes: alloc::vec![run.free_size, c.len()],
            rounds: c.rounds(),
            states_explored: c.states_explored,
            elapsed: Default::default(),
        },
    };
    match c.status {
        ClosureStatus::TargetHit(i) => {
            let term = extract_witness(c, i)?.with_params("x");
            result.term = Some(term);
            if let Some(failure) = system_failure(alg, sys, &result.binding())? {
                return Err(ForgeError::Verification {
                    system: symbol.to_string(),
                    failure: Some(failure),
                });
            }
            result.status = SynthesisStatus::Found;
            result.verified = true;
        }
        ClosureStatus::Complete => result.status = SynthesisStatus::NotTaylor,
        ClosureStatus::CapExceeded | ClosureStatus::WorkLimit => {}
    }
    result.stats.elapsed = options.clock.now().saturating_sub(start);
    Ok(result)
}

/// A 6-ary Siggers term `s(x,y,x,z,y,z) = s(y,x,z,x,z,y)` over the single
/// operation `op`, which must be a near unanimity operation. The pairs
/// `(x,y),(y,x),(x,z),(z,x),(y,z),(z,y)` of free generators are closed
/// until a pair with equal halves shows up.
pub fn siggers_from_nu(
    alg: &FiniteAlgebra,
    op: &str,
    options: &SynthesisOptions<'_>,
) -> Result<SynthesisResult, ForgeError> {
    let start = options.clock.now();
    let table = alg.require_op(op)?;
    if !check_shape(table, ShapeKind::Nu)? {
        return Err(ForgeError::NotNu { op: op.to_string() });
    }
    let ops = [(name(op), table)];
    let blocks: Vec<Vec<usize>> = [[0, 1], [1, 0], [0, 2], [2, 0], [1, 2], [2, 1]].iter().map(|b| b.to_vec()).collect();
    let run = search(&ops, alg.size(), 3, &blocks, &|t| chunks_equal(t, 2), options)?;
    let sys = builtin_system("siggers6", None).expect("builtin exists");
    conclude(alg, run, "s", Vec::new(), &sys, start, options)
}

/// A 12-ary double loop term over the designated operations (all when
/// `ops` is empty), which must be idempotent. `NotTaylor` means the
/// generated subpower has no quadruple `(u,u,v,v)`, so no double loop term
/// exists and the designated reduct is not Taylor.
pub fn double_loop_from_taylor(
    alg: &FiniteAlgebra,
    ops: &[&str],
    options: &SynthesisOptions<'_>,
) -> Result<SynthesisResult, ForgeError> {
    let start = options.clock.now();
    let reduct = alg.restrict(ops)?;
    if let Some((op, elem)) = reduct.idempotency_failure() {
        return Err(ForgeError::NotIdempotent { op: op.to_string(), elem });
    }
    let list: Vec<(Name, &OperationTable)> = reduct.ops().map(|(s, t)| (s.clone(), t)).collect();
    let blocks: Vec<Vec<usize>> = canonical_columns()
        .iter()
        .map(|col| col.iter().map(|v| usize::from(*v == XY::Y)).collect())
        .collect();
    let target = |t: &[Elem]| {
        let w = t.len() / 4;
        t[..w] == t[w..2 * w] && t[2 * w..3 * w] == t[3 * w..]
    };
    let run = search(&list, alg.size(), 2, &blocks, &target, options)?;
    conclude(alg, run, "d", Vec::new(), &double_loop_system("d"), start, options)
}

/// A 6-ary weak 3-cube term over the 12-ary symbol `d`, given a term for
/// `d` over the operations of `alg` that is idempotent and satisfies the
/// strong double loop equations. The result carries `d` as auxiliary.
pub fn weak_3cube_from_strong_double_loop(
    alg: &FiniteAlgebra,
    d: &TermFn,
    options: &SynthesisOptions<'_>,
) -> Result<SynthesisResult, ForgeError> {
    let start = options.clock.now();
    if d.arity() != 12 {
        return Err(ForgeError::Arity {
            expected: 12,
            found: d.arity(),
        });
    }
    let table = strong_double_loop_table(alg, d)?;
    let ops = [(name("d"), &table)];
    let blocks: Vec<Vec<usize>> = [[0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
        .iter()
        .map(|b| b.to_vec())
        .collect();
    let run = search(&ops, alg.size(), 2, &blocks, &|t| chunks_equal(t, 3), options)?;
    let sys = builtin_system("weak_3cube", None).expect("builtin exists");
    conclude(alg, run, "t", alloc::vec![(name("d"), d.clone())], &sys, start, options)
}

/// Table of `d` after checking idempotency and the strong double loop equations.
pub(crate) fn strong_double_loop_table(alg: &FiniteAlgebra, d: &TermFn) -> Result<OperationTable, ForgeError> {
    let binding = [(name("d"), d.clone())];
    let sys = builtin_system("strong_double_loop", None).expect("builtin exists");
    if let Some(failure) = system_failure(alg, &sys, &binding)? {
        return Err(ForgeError::Precondition {
            system: "strong double loop".to_string(),
            failure: Some(failure),
        });
    }
    let table = Model::new(alg, &binding)?.table_of("d")?;
    if let Some(elem) = table.idempotency_failure() {
        return Err(ForgeError::NotIdempotent {
            op: "d".to_string(),
            elem,
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{is_taylor_operation, samples, satisfies, ClosureOptions};
    use crate::forge::strong_double_loop_from_double_loop;

    fn boolean(symbol: &str, t: OperationTable) -> FiniteAlgebra {
        samples::algebra(2, symbol, t)
    }

    #[test]
    fn siggers_for_majority() {
        let alg = boolean("maj", samples::majority());
        let r = siggers_from_nu(&alg, "maj", &SynthesisOptions::default()).unwrap();
        assert_eq!(r.status, SynthesisStatus::Found);
        assert!(r.verified);
        let sys = builtin_system("siggers6", None).unwrap();
        assert!(satisfies(&alg, &sys, &r.binding()).unwrap());
        assert!(r.stats.closure_sizes[1] <= 2 * 256);
    }

    #[test]
    fn siggers_needs_nu() {
        let alg = boolean("p", OperationTable::projection(2, 3, 0));
        assert!(matches!(
            siggers_from_nu(&alg, "p", &SynthesisOptions::default()),
            Err(ForgeError::NotNu { .. })
        ));
    }

    #[test]
    fn double_loops_of_boolean_algebras() {
        for (s, t) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
            let alg = boolean(s, t);
            let r = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).unwrap();
            assert_eq!(r.status, SynthesisStatus::Found, "{s}");
            assert!(satisfies(&alg, &double_loop_system("d"), &r.binding()).unwrap());
        }
    }

    #[test]
    fn projection_is_not_taylor() {
        let alg = samples::algebra(3, "p", OperationTable::projection(3, 2, 0));
        let r = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).unwrap();
        assert_eq!(r.status, SynthesisStatus::NotTaylor);
        assert_eq!(r.stats.closure_sizes[1], 12);
        assert!(r.term.is_none());
    }

    #[test]
    fn not_taylor_agrees_with_taylor_check() {
        // All idempotent binary operations on two elements.
        for code in 0..4u32 {
            let t = OperationTable::new(2, 2, alloc::vec![0, code >> 1 & 1, code & 1, 1]).unwrap();
            let taylor = is_taylor_operation(&t).unwrap().verdict.is_ok();
            let alg = boolean("b", t);
            let r = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).unwrap();
            assert_eq!(r.status == SynthesisStatus::Found, taylor, "code {code}");
            assert_eq!(r.status == SynthesisStatus::NotTaylor, !taylor);
        }
    }

    #[test]
    fn rejects_non_idempotent() {
        let t = OperationTable::new(2, 2, alloc::vec![1, 0, 0, 0]).unwrap();
        assert!(matches!(
            double_loop_from_taylor(&boolean("nand", t), &[], &SynthesisOptions::default()),
            Err(ForgeError::NotIdempotent { .. })
        ));
    }

    #[test]
    fn cap_is_inconclusive() {
        let alg = boolean("maj", samples::majority());
        let options = SynthesisOptions {
            closure: ClosureOptions {
                cap: 12,
                ..ClosureOptions::default()
            },
            ..SynthesisOptions::default()
        };
        let r = double_loop_from_taylor(&alg, &[], &options).unwrap();
        assert_eq!(r.status, SynthesisStatus::Inconclusive);
    }

    #[test]
    fn weak_3cube_pipeline() {
        for (s, t) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
            let alg = boolean(s, t);
            let dl = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).unwrap();
            let strong = strong_double_loop_from_double_loop("d");
            let d = strong.term.inline("d", dl.term.as_ref().unwrap());
            let r = weak_3cube_from_strong_double_loop(&alg, &d, &SynthesisOptions::default()).unwrap();
            assert_eq!(r.status, SynthesisStatus::Found, "{s}");
            assert!(r.verified);
        }
    }

    #[test]
    fn weak_3cube_precondition() {
        let alg = samples::algebra(3, "p", OperationTable::projection(3, 12, 0));
        let d = TermFn::symbol("p", 12);
        assert!(matches!(
            weak_3cube_from_strong_double_loop(&alg, &d, &SynthesisOptions::default()),
            Err(ForgeError::Precondition { .. })
        ));
    }
}

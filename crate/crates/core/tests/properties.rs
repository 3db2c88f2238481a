use proptest::prelude::*;

use taylor_core::algebra::{extract_witness, generate_closure, replay, samples, satisfies, ClosureOptions};
use taylor_core::prover::{cc_prove, ProofSession, ProverOptions};
use taylor_core::term::{check_trivial, name, parse_term, TermKind};
use taylor_core::{Elem, Equation, EquationSystem, Name, OperationTable, Signature, Term};

fn sig() -> Signature {
    Signature::from_pairs(&[("f", 2), ("g", 1), ("h", 3)]).unwrap()
}

fn term(vars: &'static [&'static str], symbols: &'static [(&'static str, usize)], depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vars).prop_map(|v| Term::var(name(v)));
    leaf.prop_recursive(depth, 24, 3, move |inner| {
        prop::sample::select(symbols).prop_flat_map(move |(s, n)| {
            prop::collection::vec(inner.clone(), n).prop_map(move |args| Term::app(name(s), args))
        })
    })
}

const XYZ: &[&str] = &["x", "y", "z"];
const FGH: &[(&str, usize)] = &[("f", 2), ("g", 1), ("h", 3)];
const FG2: &[(&str, usize)] = &[("f", 2), ("g", 2)];
const F2: &[(&str, usize)] = &[("f", 2)];

/// The variable `t` collapses to when symbol `s` is read as projection `choice(s)`.
fn collapse(t: &Term, choice: &dyn Fn(&str) -> usize) -> Name {
    match t.kind() {
        TermKind::Var(v) => v.clone(),
        TermKind::App(s, args) => collapse(&args[choice(s)], choice),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_terms_reparse(t in term(XYZ, FGH, 4)) {
        prop_assert_eq!(parse_term(&t.to_string(), &sig()).unwrap(), t);
    }

    #[test]
    fn triviality_matches_projection_search(
        eqs in prop::collection::vec((term(XYZ, FG2, 3), term(XYZ, FG2, 3)), 1..4)
    ) {
        let sig = Signature::from_pairs(FG2).unwrap();
        let sys = EquationSystem::new(sig, eqs.iter().map(|(l, r)| Equation::new(l.clone(), r.clone())).collect()).unwrap();
        let solvable = (0..4).any(|c: usize| {
            let choice = |s: &str| if s == "f" { c & 1 } else { c >> 1 };
            eqs.iter().all(|(l, r)| collapse(l, &choice) == collapse(r, &choice))
        });
        match check_trivial(&sys) {
            Some(p) => {
                prop_assert!(solvable);
                // Unused symbols may be left out of the assignment.
                let choice = |s: &str| p.get(s).map_or(0, |i| i - 1);
                for (l, r) in &eqs {
                    prop_assert_eq!(collapse(l, &choice), collapse(r, &choice));
                }
            }
            None => prop_assert!(!solvable),
        }
    }

    #[test]
    fn witnesses_replay(
        cells in prop::collection::vec(0..3 as Elem, 9),
        gens in prop::collection::vec(prop::collection::vec(0..3 as Elem, 4), 1..3),
    ) {
        let op = OperationTable::new(3, 2, cells).unwrap();
        let ops = [(name("f"), &op)];
        let c = generate_closure(&ops, 4, &gens, &ClosureOptions::default(), None).unwrap();
        prop_assert!(c.is_complete());
        let alg = samples::algebra(3, "f", op.clone());
        for i in 0..c.len() {
            let w = extract_witness(&c, i).unwrap();
            prop_assert_eq!(replay(&alg, &gens, &w).unwrap(), c.element(i).to_vec());
        }
    }

    #[test]
    fn rebuild_restores_congruence(
        terms in prop::collection::vec(term(XYZ, FGH, 3), 2..8),
        merges in prop::collection::vec((0..8usize, 0..8usize), 0..6),
    ) {
        let mut s = ProofSession::new();
        let ids: Vec<u32> = terms.iter().map(|t| s.add_ground(t)).collect();
        for (a, b) in merges {
            s.union(ids[a % ids.len()], ids[b % ids.len()]);
        }
        s.rebuild();
        prop_assert!(s.is_congruence_closed());
        // Equal terms share a node.
        for (i, t) in terms.iter().enumerate() {
            for (j, u) in terms.iter().enumerate() {
                if t == u {
                    prop_assert!(s.equivalent(ids[i], ids[j]));
                }
            }
        }
    }

    #[test]
    fn proofs_hold_in_models(l in term(XYZ, F2, 3), r in term(XYZ, F2, 3)) {
        let sig = Signature::from_pairs(F2).unwrap();
        let axioms = EquationSystem::parse(sig.clone(), &["(= (f x x) x)", "(= (f x y) (f y x))"]).unwrap();
        let goal = Equation::new(l, r);
        let first = cc_prove(&axioms, &goal, 2, ProverOptions::default());
        let again = cc_prove(&axioms, &goal, 2, ProverOptions::default());
        prop_assert_eq!(&first, &again);
        if first.outcome.is_proved() {
            let sys = EquationSystem::new(sig, vec![goal]).unwrap();
            // Every commutative idempotent binary operation on three elements.
            for code in 0..27u32 {
                let off = [code % 3, code / 3 % 3, code / 9];
                let op = OperationTable::from_fn(3, 2, |a| match (a[0].min(a[1]), a[0].max(a[1])) {
                    (x, y) if x == y => x,
                    (0, 1) => off[0],
                    (0, 2) => off[1],
                    _ => off[2],
                });
                let alg = samples::algebra(3, "f", op);
                prop_assert!(satisfies(&alg, &sys, &[]).unwrap());
            }
        }
    }
}

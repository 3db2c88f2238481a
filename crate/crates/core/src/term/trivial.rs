use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::node::{Name, Term, TermKind};
use super::system::EquationSystem;

/// One coordinate (1-based) per operation symbol; interpreting every
/// symbol as the chosen projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionAssignment {
    pub choice: BTreeMap<Name, usize>,
}

impl ProjectionAssignment {
    pub fn get(&self, symbol: &str) -> Option<usize> {
        self.choice.get(symbol).copied()
    }
}

impl fmt::Display for ProjectionAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, c)) in self.choice.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}={c}")?;
        }
        Ok(())
    }
}

/// The variable a term collapses to when each symbol is read as a
/// projection. Symbols missing from `choice` are `None`.
pub fn reduce_by_projection<'a>(t: &'a Term, choice: &dyn Fn(&Name) -> Option<usize>) -> Option<&'a Name> {
    let mut cur = t;
    loop {
        match cur.kind() {
            TermKind::Var(v) => return Some(v),
            TermKind::App(f, args) => {
                let c = choice(f)?;
                cur = &args[c - 1];
            }
        }
    }
}

/// Decides whether `sys` is satisfied by projections.
///
/// Assignments are explored in mixed-radix order with the first symbol (in
/// name order) most significant, so the witness returned is the least one
/// in that order. Returns `None` when the system is not trivial.
pub fn check_trivial(sys: &EquationSystem) -> Option<ProjectionAssignment> {
    let symbols: Vec<(Name, usize)> = sys.signature.iter().map(|(s, n)| (s.clone(), n)).collect();
    let index: BTreeMap<&Name, usize> = symbols.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();

    // Each equation is checked as soon as its last symbol is assigned.
    let mut ready: Vec<Vec<usize>> = alloc::vec![Vec::new(); symbols.len() + 1];
    for (e, eq) in sys.equations.iter().enumerate() {
        let mut last = 0;
        for side in [&eq.lhs, &eq.rhs] {
            for (s, _) in side.symbols() {
                last = last.max(index[&s] + 1);
            }
        }
        ready[last].push(e);
    }

    let mut chosen: Vec<usize> = alloc::vec![0; symbols.len()];
    let holds = |level: usize, chosen: &[usize]| {
        ready[level].iter().all(|&e| {
            let eq = &sys.equations[e];
            let pick = |f: &Name| index.get(f).map(|&i| chosen[i]);
            reduce_by_projection(&eq.lhs, &pick) == reduce_by_projection(&eq.rhs, &pick)
        })
    };
    if !holds(0, &chosen) {
        return None;
    }
    if search(0, &symbols, &mut chosen, &holds) {
        Some(ProjectionAssignment {
            choice: symbols.iter().zip(&chosen).map(|((s, _), c)| (s.clone(), *c)).collect(),
        })
    } else {
        None
    }
}

fn search(level: usize, symbols: &[(Name, usize)], chosen: &mut [usize], holds: &dyn Fn(usize, &[usize]) -> bool) -> bool {
    if level == symbols.len() {
        return true;
    }
    for c in 1..=symbols[level].1 {
        chosen[level] = c;
        if holds(level + 1, chosen) && search(level + 1, symbols, chosen, holds) {
            return true;
        }
    }
    chosen[level] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Signature;

    fn system(pairs: &[(&str, usize)], eqs: &[&str]) -> EquationSystem {
        EquationSystem::parse(Signature::from_pairs(pairs).unwrap(), eqs).unwrap()
    }

    #[test]
    fn maltsev_is_not_trivial() {
        let s = system(&[("m", 3)], &["(= (m x x y) y (m y x x))"]);
        assert_eq!(check_trivial(&s), None);
    }

    #[test]
    fn associativity_first_projection() {
        let s = system(&[("n", 2)], &["(= (n (n x y) z) (n x (n y z)))"]);
        let w = check_trivial(&s).unwrap();
        assert_eq!(w.get("n"), Some(1));
    }

    #[test]
    fn witness_is_least_in_mixed_radix_order() {
        // f must be 2 (f(x,y) = y); g free, so g = 1 is reported.
        let s = system(&[("f", 2), ("g", 3)], &["(= (f x y) y)", "(= (g x y z) (g x z y))"]);
        let w = check_trivial(&s).unwrap();
        assert_eq!(w.get("f"), Some(2));
        assert_eq!(w.get("g"), Some(1));
    }

    #[test]
    fn brute_force_agreement_on_small_systems() {
        let s = system(&[("f", 2), ("g", 2)], &["(= (f (g x y) x) (g x (f y x)))"]);
        let mut brute = None;
        'outer: for a in 1..=2 {
            for b in 1..=2 {
                let pick = |n: &Name| Some(if &**n == "f" { a } else { b });
                let eq = &s.equations[0];
                if reduce_by_projection(&eq.lhs, &pick) == reduce_by_projection(&eq.rhs, &pick) {
                    brute = Some((a, b));
                    break 'outer;
                }
            }
        }
        let w = check_trivial(&s).map(|w| (w.get("f").unwrap(), w.get("g").unwrap()));
        assert_eq!(w, brute);
    }
}

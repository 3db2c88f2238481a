//! Reference evaluation of terms, written independently of the library
//! evaluator.

#![allow(dead_code)]

use std::collections::HashMap;

use taylor_core::term::TermKind;
use taylor_core::{Elem, EquationSystem, FiniteAlgebra, Name, Term, TermFn};

pub struct Reference<'a> {
    pub alg: &'a FiniteAlgebra,
    /// Defined symbols; a definition may use the algebra and other definitions.
    pub defs: HashMap<Name, TermFn>,
}

impl<'a> Reference<'a> {
    pub fn new(alg: &'a FiniteAlgebra, defs: &[(Name, TermFn)]) -> Reference<'a> {
        Reference {
            alg,
            defs: defs.iter().cloned().collect(),
        }
    }

    pub fn eval(&self, t: &Term, env: &HashMap<Name, Elem>) -> Elem {
        match t.kind() {
            TermKind::Var(v) => env[v],
            TermKind::App(s, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| self.eval(a, env)).collect();
                if let Some(def) = self.defs.get(s) {
                    let inner = def.params.iter().cloned().zip(vals).collect();
                    self.eval(&def.body, &inner)
                } else {
                    self.alg.op(s).expect("symbol is defined").get(&vals)
                }
            }
        }
    }

    /// Every equation under every assignment of its variables.
    pub fn holds(&self, sys: &EquationSystem) -> bool {
        let n = self.alg.size() as Elem;
        sys.equations.iter().all(|eq| {
            let vars = eq.vars();
            let mut vals = vec![0; vars.len()];
            loop {
                let env: HashMap<Name, Elem> = vars.iter().cloned().zip(vals.iter().copied()).collect();
                if self.eval(&eq.lhs, &env) != self.eval(&eq.rhs, &env) {
                    return false;
                }
                let Some(i) = vals.iter().rposition(|&v| v + 1 < n) else {
                    return true;
                };
                vals[i] += 1;
                vals[i + 1..].iter_mut().for_each(|v| *v = 0);
            }
        })
    }
}

//! Symbolic checks of the passages double loop → strong double loop →
//! `q`/`c` → strong terminator.

use alloc::string::String;
use alloc::vec::Vec;

use super::egraph::{cc_prove, ProofOutcome, ProverOptions};
use crate::forge::{q_and_c_from_strong_double_loop, terminator_from_q, QcTerms, SubstitutionScheme};
use crate::term::{
    builtin_system, double_loop_system, name, star_compose, Equation, EquationSystem, Name, Term, TermFn, XY,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteGroup {
    /// The four substitutions into `d*d*d`.
    Substitution,
    QAndC,
    Terminator,
}

impl SuiteGroup {
    pub fn label(&self) -> &'static str {
        match self {
            SuiteGroup::Substitution => "substitution",
            SuiteGroup::QAndC => "q_and_c",
            SuiteGroup::Terminator => "terminator",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationGoal {
    pub label: String,
    pub group: SuiteGroup,
    /// Axioms without idempotency; it is added unless ablated.
    pub axioms: EquationSystem,
    pub goal: Equation,
    /// Whether the argument for this goal uses idempotency.
    pub uses_idempotency: bool,
}

impl DerivationGoal {
    pub fn axioms_with_idempotency(&self) -> EquationSystem {
        self.axioms.with_idempotency()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteEntry {
    pub goal: DerivationGoal,
    pub outcome: ProofOutcome,
    /// Outcome with the idempotency axioms removed.
    pub ablated: ProofOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub depth: usize,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn all_proved(&self) -> bool {
        self.entries.iter().all(|e| e.outcome.is_proved())
    }

    /// Whether dropping idempotency breaks exactly the goals whose
    /// argument uses it.
    pub fn ablation_matches(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.ablated.is_proved() != e.goal.uses_idempotency)
    }

    pub fn first_unproved(&self) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| !e.outcome.is_proved())
    }
}

fn var(v: XY) -> Term {
    Term::var(name(v.var_name()))
}

/// `d*d*d` with position `(i,j,k)` replaced by substitution `rule`.
fn substituted(cube: &TermFn, scheme: &SubstitutionScheme, rule: usize) -> Term {
    let mut args = Vec::with_capacity(1728);
    for i in 0..12 {
        for j in 0..12 {
            for k in 0..12 {
                args.push(var(scheme.column(i, j, k)[rule]));
            }
        }
    }
    cube.apply(&args)
}

fn row_app(d: &TermFn, row: &[XY; 12], x: &Term, y: &Term) -> Term {
    let args: Vec<Term> = row.iter().map(|v| if *v == XY::X { x.clone() } else { y.clone() }).collect();
    d.apply(&args)
}

/// Goals for the substitutions (a)..(d): consecutive coincidences and the
/// common value `e(f(x,y), f(y,x))`.
pub fn substitution_goals() -> Vec<DerivationGoal> {
    let scheme = SubstitutionScheme::default();
    let d = TermFn::symbol("d", 12);
    let cube = star_compose(&d, &star_compose(&d, &d));
    let t: Vec<Term> = (0..4).map(|r| substituted(&cube, &scheme, r)).collect();
    let (x, y) = (var(XY::X), var(XY::Y));
    let common = row_app(&d, &scheme.e1, &row_app(&d, &scheme.f1, &x, &y), &row_app(&d, &scheme.f1, &y, &x));
    let axioms = double_loop_system("d");
    let names = ["a", "b", "c", "d"];
    let mut goals = Vec::new();
    for (p, uses) in [(0, false), (1, true), (2, false)] {
        goals.push(DerivationGoal {
            label: alloc::format!("({}) = ({})", names[p], names[p + 1]),
            group: SuiteGroup::Substitution,
            axioms: axioms.clone(),
            goal: Equation::new(t[p].clone(), t[p + 1].clone()),
            uses_idempotency: uses,
        });
    }
    for p in 0..4 {
        goals.push(DerivationGoal {
            label: alloc::format!("({}) = e(f(x,y),f(y,x))", names[p]),
            group: SuiteGroup::Substitution,
            axioms: axioms.clone(),
            goal: Equation::new(t[p].clone(), common.clone()),
            uses_idempotency: true,
        });
    }
    goals
}

fn inline_all(t: &Term, binding: &[(Name, TermFn)]) -> Term {
    binding.iter().fold(t.clone(), |acc, (s, f)| acc.inline(s, f))
}

fn inlined_goals(
    group: SuiteGroup,
    axioms: &EquationSystem,
    target: &EquationSystem,
    binding: &[(Name, TermFn)],
) -> Vec<DerivationGoal> {
    let texts = target.equation_texts();
    target
        .equations
        .iter()
        .zip(texts)
        .map(|(eq, text)| DerivationGoal {
            label: text,
            group,
            axioms: axioms.clone(),
            goal: Equation::new(inline_all(&eq.lhs, binding), inline_all(&eq.rhs, binding)),
            uses_idempotency: false,
        })
        .collect()
}

/// Condition (q, c) with `q1, q2, c` written through a strong double loop `d`.
pub fn q_and_c_goals() -> Vec<DerivationGoal> {
    let axioms = builtin_system("strong_double_loop", None).expect("builtin exists");
    let target = builtin_system("q_and_c", None).expect("builtin exists");
    let qc = q_and_c_from_strong_double_loop("d");
    inlined_goals(SuiteGroup::QAndC, &axioms, &target, &qc.binding())
}

/// Strong terminator equations with the terminator terms written through
/// `q1, q2, c`.
pub fn terminator_goals() -> Vec<DerivationGoal> {
    let axioms = builtin_system("q_and_c", None).expect("builtin exists");
    let target = builtin_system("strong_terminator", None).expect("builtin exists");
    let symbols = QcTerms {
        c: TermFn::symbol("c", 3),
        q1: TermFn::symbol("q1", 4),
        q2: TermFn::symbol("q2", 4),
    };
    let t = terminator_from_q(&symbols);
    // `c` stays a symbol of the axioms.
    let binding: Vec<_> = t.binding().into_iter().filter(|(s, _)| &**s != "c").collect();
    inlined_goals(SuiteGroup::Terminator, &axioms, &target, &binding)
}

pub fn derivation_goals() -> Vec<DerivationGoal> {
    let mut goals = substitution_goals();
    goals.extend(q_and_c_goals());
    goals.extend(terminator_goals());
    goals
}

/// Runs [`cc_prove`] on every derivation goal, with and without the
/// idempotency axioms of the axiom symbols.
pub fn verify_derivation_suite(depth: usize, options: ProverOptions) -> SuiteReport {
    let entries = derivation_goals()
        .into_iter()
        .map(|goal| {
            let outcome = cc_prove(&goal.axioms_with_idempotency(), &goal.goal, depth, options);
            let ablated = cc_prove(&goal.axioms, &goal.goal, depth, options);
            SuiteEntry {
                goal,
                outcome: outcome.outcome,
                ablated: ablated.outcome,
            }
        })
        .collect();
    SuiteReport { depth, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{satisfies, samples};
    use crate::forge::{double_loop_from_taylor, strong_double_loop_from_double_loop, SynthesisOptions};

    #[test]
    fn suite_proves_everything() {
        let report = verify_derivation_suite(2, ProverOptions::default());
        if let Some(e) = report.first_unproved() {
            panic!("unproved: {} ({:?})", e.goal.label, e.goal.group);
        }
        for e in &report.entries {
            assert_eq!(e.ablated.is_proved(), !e.goal.uses_idempotency, "{}", e.goal.label);
        }
        assert!(report.ablation_matches());
    }

    #[test]
    fn goals_hold_in_models() {
        // Soundness audit: proved goals hold where the axioms hold.
        for (s, t) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
            let alg = samples::algebra(2, s, t);
            let dl = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).unwrap();
            let d = dl.term.unwrap();
            let strong = strong_double_loop_from_double_loop("d").term.inline("d", &d);
            for g in substitution_goals() {
                let sys = EquationSystem::new(g.axioms.signature.clone(), alloc::vec![g.goal.clone()]).unwrap();
                assert!(satisfies(&alg, &sys, &[(name("d"), d.clone())]).unwrap(), "{}", g.label);
            }
            for g in q_and_c_goals() {
                let sys = EquationSystem::new(g.axioms.signature.clone(), alloc::vec![g.goal.clone()]).unwrap();
                assert!(satisfies(&alg, &sys, &[(name("d"), strong.clone())]).unwrap(), "{}", g.label);
            }
        }
    }
}

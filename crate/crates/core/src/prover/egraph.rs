//! Ground congruence closure over a hash-consed term universe, with axiom
//! instances added by matching axiom sides against the universe.

use alloc::vec::Vec;

use crate::term::{Equation, EquationSystem, Name, Term, TermKind};
use crate::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Symbol {
    Op(u32),
    /// A goal variable, frozen to a constant.
    Const(u32),
}

#[derive(Clone, Debug)]
struct Node {
    sym: Symbol,
    args: Vec<u32>,
}

type Subst = Vec<(Name, u32)>;

fn bound(s: &Subst, v: &Name) -> Option<u32> {
    s.iter().find(|(n, _)| n == v).map(|&(_, c)| c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverOptions {
    /// Largest number of universe nodes before giving up.
    pub node_budget: usize,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions { node_budget: 200_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofOutcome {
    /// The goal sides merged after this many growth rounds.
    Proved { depth: usize },
    /// Not derived within the depth; not a refutation.
    Unknown,
    /// The node budget was exhausted.
    Budget,
}

impl ProofOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofOutcome::Proved { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ProofOutcome::Proved { .. } => "proved",
            ProofOutcome::Unknown => "unknown",
            ProofOutcome::Budget => "budget",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub outcome: ProofOutcome,
    pub nodes: usize,
    pub classes: usize,
    /// Axiom instances that introduced new nodes.
    pub instantiations: usize,
    pub merges: usize,
}

/// An e-graph: terms as nodes, a union-find over nodes, and congruence
/// restored by [`ProofSession::rebuild`].
#[derive(Clone, Debug, Default)]
pub struct ProofSession {
    ops: Vec<Name>,
    op_index: HashMap<Name, u32>,
    consts: Vec<Name>,
    const_index: HashMap<Name, u32>,
    nodes: Vec<Node>,
    parent: Vec<u32>,
    table: HashMap<(Symbol, Vec<u32>), u32>,
    by_sym: HashMap<Symbol, Vec<u32>>,
    members: HashMap<u32, Vec<u32>>,
    merges: usize,
    instantiations: usize,
}

impl ProofSession {
    pub fn new() -> ProofSession {
        ProofSession::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn class_count(&mut self) -> usize {
        (0..self.nodes.len() as u32).filter(|&n| self.find(n) == n).count()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let g = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = g;
            x = g;
        }
        x
    }

    /// Merges two classes; [`ProofSession::rebuild`] restores congruence.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi as usize] = lo;
        self.merges += 1;
        true
    }

    fn op(&mut self, f: &Name) -> Symbol {
        let next = self.ops.len() as u32;
        let id = *self.op_index.entry(f.clone()).or_insert(next);
        if id == next {
            self.ops.push(f.clone());
        }
        Symbol::Op(id)
    }

    fn constant(&mut self, v: &Name) -> Symbol {
        let next = self.consts.len() as u32;
        let id = *self.const_index.entry(v.clone()).or_insert(next);
        if id == next {
            self.consts.push(v.clone());
        }
        Symbol::Const(id)
    }

    fn key(&mut self, sym: Symbol, args: &[u32]) -> (Symbol, Vec<u32>) {
        (sym, args.iter().map(|&a| self.find(a)).collect())
    }

    fn intern(&mut self, sym: Symbol, args: Vec<u32>) -> u32 {
        let key = self.key(sym, &args);
        if let Some(&n) = self.table.get(&key) {
            return self.find(n);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(Node { sym, args });
        self.parent.push(id);
        self.table.insert(key, id);
        self.by_sym.entry(sym).or_default().push(id);
        self.members.entry(id).or_default().push(id);
        id
    }

    /// Adds a ground term; variables are constants.
    pub fn add_ground(&mut self, t: &Term) -> u32 {
        self.add(t, &Vec::new(), true)
    }

    /// Adds `t` under `s`; unbound variables become constants when
    /// `freeze` is set and are not expected otherwise.
    fn add(&mut self, t: &Term, s: &Subst, freeze: bool) -> u32 {
        match t.kind() {
            TermKind::Var(v) => match bound(s, v) {
                Some(c) => self.find(c),
                None => {
                    assert!(freeze, "unbound axiom variable `{v}`");
                    let sym = self.constant(v);
                    self.intern(sym, Vec::new())
                }
            },
            TermKind::App(f, args) => {
                let children: Vec<u32> = args.iter().map(|a| self.add(a, s, freeze)).collect();
                let sym = self.op(f);
                self.intern(sym, children)
            }
        }
    }

    /// The class of `t` under `s` if it is already represented.
    fn lookup(&mut self, t: &Term, s: &Subst) -> Option<u32> {
        match t.kind() {
            TermKind::Var(v) => bound(s, v).map(|c| self.find(c)),
            TermKind::App(f, args) => {
                let sym = Symbol::Op(*self.op_index.get(f)?);
                let mut children = Vec::with_capacity(args.len());
                for a in args {
                    children.push(self.lookup(a, s)?);
                }
                let n = *self.table.get(&(sym, children))?;
                Some(self.find(n))
            }
        }
    }

    /// Restores the congruence invariant and the lookup tables.
    pub fn rebuild(&mut self) {
        loop {
            let mut changed = false;
            self.table.clear();
            for n in 0..self.nodes.len() as u32 {
                let node = self.nodes[n as usize].clone();
                let key = self.key(node.sym, &node.args);
                match self.table.get(&key) {
                    Some(&m) => changed |= self.union(m, n),
                    None => {
                        self.table.insert(key, n);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.members.clear();
        for n in 0..self.nodes.len() as u32 {
            let c = self.find(n);
            self.members.entry(c).or_default().push(n);
        }
    }

    /// Whether nodes with the same symbol and argument classes share a class.
    pub fn is_congruence_closed(&mut self) -> bool {
        let mut seen: HashMap<(Symbol, Vec<u32>), u32> = HashMap::new();
        for n in 0..self.nodes.len() as u32 {
            let node = self.nodes[n as usize].clone();
            let key = self.key(node.sym, &node.args);
            let c = self.find(n);
            if let Some(&other) = seen.get(&key) {
                if other != c {
                    return false;
                }
            } else {
                seen.insert(key, c);
            }
        }
        true
    }

    pub fn equivalent(&mut self, a: u32, b: u32) -> bool {
        self.find(a) == self.find(b)
    }

    fn match_in_class(&mut self, p: &Term, class: u32, s: Subst, out: &mut Vec<Subst>) {
        match p.kind() {
            TermKind::Var(v) => match bound(&s, v) {
                Some(c) if self.find(c) != class => {}
                Some(_) => out.push(s),
                None => {
                    let mut s = s;
                    s.push((v.clone(), class));
                    out.push(s);
                }
            },
            TermKind::App(f, _) => {
                let Some(&id) = self.op_index.get(f) else { return };
                let nodes: Vec<u32> = self
                    .members
                    .get(&class)
                    .map(|m| m.iter().copied().filter(|&n| self.nodes[n as usize].sym == Symbol::Op(id)).collect())
                    .unwrap_or_default();
                for n in nodes {
                    self.match_node(p, n, s.clone(), out);
                }
            }
        }
    }

    fn match_node(&mut self, p: &Term, n: u32, s: Subst, out: &mut Vec<Subst>) {
        let TermKind::App(_, pargs) = p.kind() else { unreachable!("patterns at nodes are applications") };
        let args = self.nodes[n as usize].args.clone();
        if args.len() != pargs.len() {
            return;
        }
        let mut partial = alloc::vec![s];
        for (pa, &a) in pargs.iter().zip(&args) {
            let class = self.find(a);
            let mut next = Vec::new();
            for s in partial {
                self.match_in_class(pa, class, s, &mut next);
            }
            if next.is_empty() {
                return;
            }
            partial = next;
        }
        out.extend(partial);
    }

    /// All instances `(eq, forward, subst, matched class)` of the oriented
    /// axioms whose source side matches a node of the universe.
    fn matches(&mut self, axioms: &[(Term, Term)]) -> Vec<(usize, Subst, u32)> {
        let mut out = Vec::new();
        for (i, (from, _)) in axioms.iter().enumerate() {
            let TermKind::App(f, _) = from.kind() else { continue };
            let Some(&id) = self.op_index.get(f) else { continue };
            let candidates = self.by_sym.get(&Symbol::Op(id)).cloned().unwrap_or_default();
            let mut seen = crate::HashSet::new();
            for n in candidates {
                let mut found = Vec::new();
                self.match_node(from, n, Vec::new(), &mut found);
                let class = self.find(n);
                for mut s in found {
                    for b in s.iter_mut() {
                        b.1 = self.find(b.1);
                    }
                    s.sort();
                    if seen.insert((s.clone(), class)) {
                        out.push((i, s, class));
                    }
                }
            }
        }
        out
    }

    /// Merges every instance whose other side already exists, until stable.
    fn saturate(&mut self, axioms: &[(Term, Term)]) {
        loop {
            let mut changed = false;
            for (i, s, class) in self.matches(axioms) {
                if let Some(o) = self.lookup(&axioms[i].1, &s) {
                    changed |= self.union(o, class);
                }
            }
            self.rebuild();
            if !changed {
                break;
            }
        }
    }

    /// Adds the other side of every instance; false when over budget.
    fn grow(&mut self, axioms: &[(Term, Term)], budget: usize) -> bool {
        for (i, s, class) in self.matches(axioms) {
            if self.lookup(&axioms[i].1, &s).is_none() {
                self.instantiations += 1;
            }
            let o = self.add(&axioms[i].1, &s, false);
            self.union(o, class);
            if self.nodes.len() > budget {
                return false;
            }
        }
        self.rebuild();
        true
    }
}

/// Both orientations of every axiom whose source side is an application
/// binding all variables of the other side.
fn oriented(axioms: &EquationSystem) -> Vec<(Term, Term)> {
    let mut out = Vec::new();
    for eq in &axioms.equations {
        for (a, b) in [(&eq.lhs, &eq.rhs), (&eq.rhs, &eq.lhs)] {
            if a.is_var() {
                continue;
            }
            let av = a.vars();
            if b.vars().iter().all(|v| av.contains(v)) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Tries to derive `goal` from `axioms`, reading goal variables as
/// constants. Each of the `depth` rounds adds the instances matched in the
/// current universe; in between, instances that need no new terms are
/// merged until nothing changes.
pub fn cc_prove(axioms: &EquationSystem, goal: &Equation, depth: usize, options: ProverOptions) -> ProofReport {
    let rules = oriented(axioms);
    let mut session = ProofSession::new();
    let l = session.add_ground(&goal.lhs);
    let r = session.add_ground(&goal.rhs);
    session.rebuild();
    let mut outcome = ProofOutcome::Unknown;
    for round in 0..=depth {
        if round > 0 && !session.grow(&rules, options.node_budget) {
            outcome = ProofOutcome::Budget;
            break;
        }
        session.saturate(&rules);
        if session.equivalent(l, r) {
            outcome = ProofOutcome::Proved { depth: round };
            break;
        }
    }
    debug_assert!(outcome == ProofOutcome::Budget || session.is_congruence_closed());
    ProofReport {
        outcome,
        nodes: session.node_count(),
        classes: session.class_count(),
        instantiations: session.instantiations,
        merges: session.merges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{builtin_system, Signature};

    fn system(sig: &[(&str, usize)], eqs: &[&str]) -> EquationSystem {
        EquationSystem::parse(Signature::from_pairs(sig).unwrap(), eqs).unwrap()
    }

    fn goal(sig: &[(&str, usize)], eq: &str) -> Equation {
        system(sig, &[eq]).equations[0].clone()
    }

    #[test]
    fn idempotent_binary() {
        let ax = system(&[("f", 2)], &["(= (f x x) x)"]);
        let g = goal(&[("f", 2)], "(= (f (f x x) x) x)");
        let r = cc_prove(&ax, &g, 1, ProverOptions::default());
        assert!(r.outcome.is_proved());
    }

    #[test]
    fn no_axioms() {
        let ax = system(&[("f", 2)], &[]);
        let g = goal(&[("f", 2)], "(= x y)");
        assert_eq!(cc_prove(&ax, &g, 2, ProverOptions::default()).outcome, ProofOutcome::Unknown);
    }

    #[test]
    fn congruence_only() {
        let ax = system(&[("f", 1), ("g", 1)], &["(= (g x) (f x))"]);
        let g = goal(&[("f", 1), ("g", 1)], "(= (f (g a)) (f (f a)))");
        assert_eq!(
            cc_prove(&ax, &g, 0, ProverOptions::default()).outcome,
            ProofOutcome::Proved { depth: 0 }
        );
    }

    #[test]
    fn chain_needs_a_round() {
        let ax = builtin_system("strong_double_loop", None).unwrap();
        let g = goal(
            &[("d", 12)],
            "(= (d x x x x x x y y y y y y) (d y x x y x y x y x y y x))",
        );
        let r = cc_prove(&ax, &g, 1, ProverOptions::default());
        assert_eq!(r.outcome, ProofOutcome::Proved { depth: 1 });
        assert_eq!(cc_prove(&ax, &g, 0, ProverOptions::default()).outcome, ProofOutcome::Unknown);
    }

    #[test]
    fn budget_reported() {
        let ax = system(&[("f", 1), ("g", 1)], &["(= (f x) (f (g x)))"]);
        let g = goal(&[("f", 1), ("g", 1)], "(= (f a) a)");
        let r = cc_prove(&ax, &g, 50, ProverOptions { node_budget: 20 });
        assert_eq!(r.outcome, ProofOutcome::Budget);
    }

    #[test]
    fn session_stays_closed() {
        let mut s = ProofSession::new();
        let ax = system(&[("f", 2)], &["(= (f x x) x)"]);
        let t = goal(&[("f", 2)], "(= (f (f a b) (f a b)) (f b a))");
        let a = s.add_ground(&t.lhs);
        let b = s.add_ground(&t.rhs);
        s.rebuild();
        s.saturate(&oriented(&ax));
        assert!(s.is_congruence_closed());
        assert!(!s.equivalent(a, b));
    }
}

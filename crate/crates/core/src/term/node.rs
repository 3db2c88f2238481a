use alloc::format;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::{HashMap, HashSet};

/// Interned identifier used for symbols and variables.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    Var(Name),
    App(Name, Vec<Term>),
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    hash: u64,
    depth: u32,
}

/// Immutable term. Clones share structure, so a term is a DAG whose
/// shared subterms are stored once; equality is structural.
#[derive(Clone)]
pub struct Term(Arc<Node>);

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv(mut h: u64, bytes: &[u8]) -> u64 {
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        let name = name.into();
        let hash = fnv(fnv(FNV_OFFSET, b"v"), name.as_bytes());
        Term(Arc::new(Node {
            kind: TermKind::Var(name),
            hash,
            depth: 0,
        }))
    }

    pub fn app(symbol: impl Into<Name>, children: Vec<Term>) -> Term {
        let symbol = symbol.into();
        let mut hash = fnv(fnv(FNV_OFFSET, b"a"), symbol.as_bytes());
        let mut depth = 0;
        for c in &children {
            hash = fnv(hash, &c.0.hash.to_le_bytes());
            depth = depth.max(c.0.depth);
        }
        hash = fnv(hash, &(children.len() as u64).to_le_bytes());
        Term(Arc::new(Node {
            kind: TermKind::App(symbol, children),
            hash,
            depth: depth + 1,
        }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn as_var(&self) -> Option<&Name> {
        match &self.0.kind {
            TermKind::Var(v) => Some(v),
            TermKind::App(..) => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Name, &[Term])> {
        match &self.0.kind {
            TermKind::Var(_) => None,
            TermKind::App(f, args) => Some((f, args)),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0.kind, TermKind::Var(_))
    }

    /// Height of the term; variables have depth 0.
    pub fn depth(&self) -> usize {
        self.0.depth as usize
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as *const () as usize
    }

    /// Variables in order of first occurrence (left to right, depth first).
    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        let mut seen_vars: HashSet<Name> = HashSet::new();
        let mut seen_nodes: HashSet<usize> = HashSet::new();
        self.collect_vars(&mut out, &mut seen_vars, &mut seen_nodes);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Name>, seen: &mut HashSet<Name>, nodes: &mut HashSet<usize>) {
        if !nodes.insert(self.addr()) {
            return;
        }
        match self.kind() {
            TermKind::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            TermKind::App(_, args) => {
                for a in args {
                    a.collect_vars(out, seen, nodes);
                }
            }
        }
    }

    /// Operation symbols with the arities at which they occur.
    pub fn symbols(&self) -> Vec<(Name, usize)> {
        let mut out: Vec<(Name, usize)> = Vec::new();
        let mut nodes: HashSet<usize> = HashSet::new();
        let mut stack = alloc::vec![self.clone()];
        while let Some(t) = stack.pop() {
            if !nodes.insert(t.addr()) {
                continue;
            }
            if let TermKind::App(f, args) = t.kind() {
                if !out.iter().any(|(g, n)| g == f && *n == args.len()) {
                    out.push((f.clone(), args.len()));
                }
                stack.extend(args.iter().cloned());
            }
        }
        out.sort();
        out
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(&self) -> usize {
        let mut nodes: HashSet<usize> = HashSet::new();
        let mut stack = alloc::vec![self.clone()];
        while let Some(t) = stack.pop() {
            if nodes.insert(t.addr()) {
                if let TermKind::App(_, args) = t.kind() {
                    stack.extend(args.iter().cloned());
                }
            }
        }
        nodes.len()
    }

    /// Replaces variables according to `map`; unmapped variables stay.
    /// Shared subterms are rewritten once.
    pub fn substitute(&self, map: &dyn Fn(&Name) -> Option<Term>) -> Term {
        let mut memo: HashMap<usize, Term> = HashMap::new();
        self.subst_memo(map, &mut memo)
    }

    fn subst_memo(&self, map: &dyn Fn(&Name) -> Option<Term>, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(t) = memo.get(&self.addr()) {
            return t.clone();
        }
        let out = match self.kind() {
            TermKind::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            TermKind::App(f, args) => {
                let new_args: Vec<Term> = args.iter().map(|a| a.subst_memo(map, memo)).collect();
                if new_args.iter().zip(args).all(|(n, o)| n.ptr_eq(o)) {
                    self.clone()
                } else {
                    Term::app(f.clone(), new_args)
                }
            }
        };
        memo.insert(self.addr(), out.clone());
        out
    }

    /// Replaces every application of `symbol` by the corresponding instance
    /// of `def`.
    pub fn inline(&self, symbol: &str, def: &TermFn) -> Term {
        let mut memo: HashMap<usize, Term> = HashMap::new();
        self.inline_memo(symbol, def, &mut memo)
    }

    fn inline_memo(&self, symbol: &str, def: &TermFn, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(t) = memo.get(&self.addr()) {
            return t.clone();
        }
        let out = match self.kind() {
            TermKind::Var(_) => self.clone(),
            TermKind::App(f, args) => {
                let new_args: Vec<Term> = args.iter().map(|a| a.inline_memo(symbol, def, memo)).collect();
                if &**f == symbol && args.len() == def.arity() {
                    def.apply(&new_args)
                } else {
                    Term::app(f.clone(), new_args)
                }
            }
        };
        memo.insert(self.addr(), out.clone());
        out
    }

    fn write_sexpr(&self, out: &mut dyn fmt::Write) -> fmt::Result {
        match self.kind() {
            TermKind::Var(v) => out.write_str(v),
            TermKind::App(f, args) => {
                out.write_char('(')?;
                out.write_str(f)?;
                for a in args {
                    out.write_char(' ')?;
                    a.write_sexpr(out)?;
                }
                out.write_char(')')
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Var(a), TermKind::Var(b)) => a.cmp(b),
            (TermKind::Var(_), TermKind::App(..)) => Ordering::Less,
            (TermKind::App(..), TermKind::Var(_)) => Ordering::Greater,
            (TermKind::App(f, xs), TermKind::App(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_sexpr(f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

/// Hash-consing table: structurally equal terms built through the same bank
/// are the same allocation.
#[derive(Default)]
pub struct TermBank {
    table: HashSet<Term>,
}

impl TermBank {
    pub fn new() -> TermBank {
        TermBank::default()
    }

    pub fn var(&mut self, name: impl Into<Name>) -> Term {
        self.intern(Term::var(name))
    }

    pub fn app(&mut self, symbol: impl Into<Name>, children: Vec<Term>) -> Term {
        self.intern(Term::app(symbol, children))
    }

    fn intern(&mut self, t: Term) -> Term {
        if let Some(existing) = self.table.get(&t) {
            return existing.clone();
        }
        self.table.insert(t.clone());
        t
    }

    /// Re-interns every node of `t` bottom-up.
    pub fn share(&mut self, t: &Term) -> Term {
        let mut memo: HashMap<usize, Term> = HashMap::new();
        self.share_memo(t, &mut memo)
    }

    fn share_memo(&mut self, t: &Term, memo: &mut HashMap<usize, Term>) -> Term {
        if let Some(s) = memo.get(&t.addr()) {
            return s.clone();
        }
        let out = match t.kind() {
            TermKind::Var(v) => self.var(v.clone()),
            TermKind::App(f, args) => {
                let args = args.iter().map(|a| self.share_memo(a, memo)).collect();
                self.app(f.clone(), args)
            }
        };
        memo.insert(t.addr(), out.clone());
        out
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// A term together with an ordered parameter list, i.e. an `n`-ary term
/// operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TermFn {
    pub params: Vec<Name>,
    pub body: Term,
}

impl TermFn {
    pub fn new(params: Vec<Name>, body: Term) -> TermFn {
        TermFn { params, body }
    }

    /// `symbol(x1, ..., xn)`.
    pub fn symbol(symbol: &str, arity: usize) -> TermFn {
        let params: Vec<Name> = (1..=arity).map(|i| name(&format!("x{i}"))).collect();
        let body = Term::app(name(symbol), params.iter().cloned().map(Term::var).collect());
        TermFn { params, body }
    }

    /// The `i`-th projection (0-based) of the given arity.
    pub fn projection(arity: usize, i: usize) -> TermFn {
        let params: Vec<Name> = (1..=arity).map(|k| name(&format!("x{k}"))).collect();
        let body = Term::var(params[i].clone());
        TermFn { params, body }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Substitutes `args` for the parameters.
    pub fn apply(&self, args: &[Term]) -> Term {
        assert_eq!(args.len(), self.params.len(), "arity mismatch applying term function");
        let lookup: HashMap<&Name, &Term> = self.params.iter().zip(args).collect();
        self.body.substitute(&|v| lookup.get(v).map(|t| (*t).clone()))
    }

    /// Applies the term operation to variable names.
    pub fn apply_vars(&self, args: &[&str]) -> Term {
        let args: Vec<Term> = args.iter().map(|a| Term::var(name(a))).collect();
        self.apply(&args)
    }

    pub fn inline(&self, symbol: &str, def: &TermFn) -> TermFn {
        TermFn {
            params: self.params.clone(),
            body: self.body.inline(symbol, def),
        }
    }

    /// Renames parameters (and their occurrences) to `x1..xn`.
    pub fn with_params(&self, prefix: &str) -> TermFn {
        let params: Vec<Name> = (1..=self.arity()).map(|i| name(&format!("{prefix}{i}"))).collect();
        let vars: Vec<Term> = params.iter().cloned().map(Term::var).collect();
        TermFn {
            body: self.apply(&vars),
            params,
        }
    }
}

impl fmt::Display for TermFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(fn (")?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(p)?;
        }
        write!(f, ") {})", self.body)
    }
}

impl fmt::Debug for TermFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Star composition: the `(n*m)`-ary term `f(g(x11..x1m), ..., g(xn1..xnm))`.
/// Fresh parameters `x1..x{n*m}` are numbered row-major.
pub fn star_compose(f: &TermFn, g: &TermFn) -> TermFn {
    let n = f.arity();
    let m = g.arity();
    let params: Vec<Name> = (1..=n * m).map(|k| name(&format!("x{k}"))).collect();
    let mut bank = TermBank::new();
    let blocks: Vec<Term> = (0..n)
        .map(|i| {
            let args: Vec<Term> = params[i * m..(i + 1) * m].iter().map(|p| bank.var(p.clone())).collect();
            bank.share(&g.apply(&args))
        })
        .collect();
    let body = bank.share(&f.apply(&blocks));
    TermFn { params, body }
}

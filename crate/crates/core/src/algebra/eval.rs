//! Evaluating terms in a finite algebra, possibly through derived
//! operations bound to symbols.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::table::{for_each_tuple, table_len};
use super::{AlgebraError, Elem, FiniteAlgebra, OperationTable};
use crate::term::{Equation, EquationSystem, Name, Term, TermFn, TermKind};
use crate::HashMap;

/// Derived operations with at most this many table entries are tabulated.
const TABULATE_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    App(usize, Vec<usize>),
}

/// A term compiled to a topologically ordered node list.
#[derive(Clone, Debug)]
struct Program {
    nodes: Vec<Node>,
}

#[derive(Clone, Debug)]
enum Def {
    Table(OperationTable),
    Program(Program, usize),
}

impl Def {
    fn arity(&self) -> usize {
        match self {
            Def::Table(t) => t.arity(),
            Def::Program(_, n) => *n,
        }
    }
}

/// An algebra together with symbol bindings to term operations.
///
/// Symbols are resolved through the bindings first and then through the
/// algebra's own operations. Bodies of bindings may use the algebra's
/// operations and earlier bindings.
#[derive(Clone, Debug)]
pub struct Model {
    size: usize,
    defs: Vec<Def>,
    lookup: BTreeMap<Name, usize>,
}

impl Model {
    pub fn new(alg: &FiniteAlgebra, binding: &[(Name, TermFn)]) -> Result<Model, AlgebraError> {
        let mut defs = Vec::new();
        let mut lookup = BTreeMap::new();
        for (s, t) in alg.ops() {
            lookup.insert(s.clone(), defs.len());
            defs.push(Def::Table(t.clone()));
        }
        let mut model = Model {
            size: alg.size(),
            defs,
            lookup,
        };
        for (s, f) in binding {
            let scope = model.lookup.clone();
            let prog = model.compile(&f.body, &f.params, &scope)?;
            let arity = f.arity();
            let def = match table_len(model.size, arity) {
                Some(len) if len <= TABULATE_LIMIT => {
                    let mut scratch = Vec::new();
                    Def::Table(OperationTable::from_fn(model.size, arity, |a| model.run(&prog, a, &mut scratch)))
                }
                _ => Def::Program(prog, arity),
            };
            model.lookup.insert(s.clone(), model.defs.len());
            model.defs.push(def);
        }
        Ok(model)
    }

    /// Model of the algebra's own operations.
    pub fn plain(alg: &FiniteAlgebra) -> Model {
        Model::new(alg, &[]).expect("no bindings to resolve")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Table of a resolved symbol, tabulating a derived operation if needed.
    pub fn table_of(&self, symbol: &str) -> Result<OperationTable, AlgebraError> {
        let i = *self.lookup.get(symbol).ok_or_else(|| AlgebraError::UnboundSymbol(symbol.to_string()))?;
        match &self.defs[i] {
            Def::Table(t) => Ok(t.clone()),
            Def::Program(p, n) => {
                table_len(self.size, *n).ok_or(AlgebraError::TooLarge { size: self.size, arity: *n })?;
                let mut scratch = Vec::new();
                Ok(OperationTable::from_fn(self.size, *n, |a| self.run(p, a, &mut scratch)))
            }
        }
    }

    fn compile(&self, t: &Term, vars: &[Name], scope: &BTreeMap<Name, usize>) -> Result<Program, AlgebraError> {
        let mut nodes = Vec::new();
        let mut memo: HashMap<usize, usize> = HashMap::new();
        let var_index: BTreeMap<&Name, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        self.compile_rec(t, &var_index, scope, &mut nodes, &mut memo)?;
        Ok(Program { nodes })
    }

    fn compile_rec(
        &self,
        t: &Term,
        vars: &BTreeMap<&Name, usize>,
        scope: &BTreeMap<Name, usize>,
        nodes: &mut Vec<Node>,
        memo: &mut HashMap<usize, usize>,
    ) -> Result<usize, AlgebraError> {
        let key = t.addr();
        if let Some(&i) = memo.get(&key) {
            return Ok(i);
        }
        let node = match t.kind() {
            TermKind::Var(v) => Node::Var(*vars.get(v).ok_or_else(|| AlgebraError::UnboundVariable(v.to_string()))?),
            TermKind::App(f, args) => {
                let d = *scope.get(f).ok_or_else(|| AlgebraError::UnboundSymbol(f.to_string()))?;
                let expected = self.defs[d].arity();
                if expected != args.len() {
                    return Err(AlgebraError::ArityMismatch {
                        symbol: f.to_string(),
                        expected,
                        found: args.len(),
                    });
                }
                let mut children = Vec::with_capacity(args.len());
                for a in args {
                    children.push(self.compile_rec(a, vars, scope, nodes, memo)?);
                }
                Node::App(d, children)
            }
        };
        nodes.push(node);
        memo.insert(key, nodes.len() - 1);
        Ok(nodes.len() - 1)
    }

    fn run(&self, p: &Program, args: &[Elem], scratch: &mut Vec<Elem>) -> Elem {
        let base = scratch.len();
        let mut buf: Vec<Elem> = Vec::new();
        for node in &p.nodes {
            let v = match node {
                Node::Var(i) => args[*i],
                Node::App(d, children) => {
                    buf.clear();
                    buf.extend(children.iter().map(|&c| scratch[base + c]));
                    match &self.defs[*d] {
                        Def::Table(t) => t.get(&buf),
                        Def::Program(q, _) => {
                            let args = core::mem::take(&mut buf);
                            let v = self.run(q, &args, scratch);
                            buf = args;
                            v
                        }
                    }
                }
            };
            scratch.push(v);
        }
        let out = scratch[scratch.len() - 1];
        scratch.truncate(base);
        out
    }

    /// A compiled term over the given variable order.
    pub fn prepare(&self, t: &Term, vars: &[Name]) -> Result<PreparedTerm<'_>, AlgebraError> {
        Ok(PreparedTerm {
            model: self,
            program: self.compile(t, vars, &self.lookup)?,
            scratch: Vec::new(),
        })
    }

    /// The term operation of `t` over its variables in first-occurrence order.
    pub fn term_table(&self, t: &Term) -> Result<(Vec<Name>, OperationTable), AlgebraError> {
        let vars = t.vars();
        let mut p = self.prepare(t, &vars)?;
        table_len(self.size, vars.len()).ok_or(AlgebraError::TooLarge {
            size: self.size,
            arity: vars.len(),
        })?;
        let table = OperationTable::from_fn(self.size, vars.len(), |a| p.eval(a));
        Ok((vars, table))
    }

    /// First assignment violating `eq`, over the equation's variables in
    /// first-occurrence order.
    pub fn equation_failure(&self, eq: &Equation) -> Result<Option<Vec<Elem>>, AlgebraError> {
        let vars = eq.vars();
        let mut l = self.prepare(&eq.lhs, &vars)?;
        let mut r = self.prepare(&eq.rhs, &vars)?;
        let mut failure = None;
        for_each_tuple(self.size, vars.len(), |a| {
            if l.eval(a) != r.eval(a) {
                failure = Some(a.to_vec());
                false
            } else {
                true
            }
        });
        Ok(failure)
    }

    /// First violated equation with its variables and assignment.
    pub fn system_failure(&self, sys: &EquationSystem) -> Result<Option<Failure>, AlgebraError> {
        for (i, eq) in sys.equations.iter().enumerate() {
            if let Some(assignment) = self.equation_failure(eq)? {
                return Ok(Some(Failure {
                    equation: i,
                    vars: eq.vars(),
                    assignment,
                }));
            }
        }
        Ok(None)
    }
}

/// A violated equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub equation: usize,
    pub vars: Vec<Name>,
    pub assignment: Vec<Elem>,
}

impl core::fmt::Display for Failure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "equation {} fails at", self.equation + 1)?;
        for (v, a) in self.vars.iter().zip(&self.assignment) {
            write!(f, " {v}={a}")?;
        }
        Ok(())
    }
}

pub struct PreparedTerm<'m> {
    model: &'m Model,
    program: Program,
    scratch: Vec<Elem>,
}

impl PreparedTerm<'_> {
    pub fn eval(&mut self, args: &[Elem]) -> Elem {
        self.model.run(&self.program, args, &mut self.scratch)
    }
}

/// The term operation induced by `t`; variables are ordered by first occurrence.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, binding: &[(Name, TermFn)]) -> Result<OperationTable, AlgebraError> {
    Ok(Model::new(alg, binding)?.term_table(t)?.1)
}

/// Exhaustive check of every equation of `sys` under the binding.
pub fn satisfies(alg: &FiniteAlgebra, sys: &EquationSystem, binding: &[(Name, TermFn)]) -> Result<bool, AlgebraError> {
    Ok(Model::new(alg, binding)?.system_failure(sys)?.is_none())
}

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::node::{name, Name, Term, TermBank, TermKind};
use super::sexpr::{equation_text, parse_equation_chain};
use super::TermError;

/// Operation symbols with their arities (all arities at least 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Signature, TermError> {
        let mut sig = Signature::new();
        for (s, n) in pairs {
            sig.declare(s, *n)?;
        }
        Ok(sig)
    }

    pub fn declare(&mut self, symbol: &str, arity: usize) -> Result<(), TermError> {
        if arity == 0 {
            return Err(TermError::ZeroArity { symbol: symbol.to_string() });
        }
        if symbol.is_empty() || symbol == "=" || symbol.contains(['(', ')', ';', ',']) || symbol.contains(char::is_whitespace) {
            return Err(TermError::BadSymbol { symbol: symbol.to_string() });
        }
        match self.symbols.get(symbol) {
            Some(&a) if a != arity => Err(TermError::DuplicateSymbol { symbol: symbol.to_string() }),
            _ => {
                self.symbols.insert(name(symbol), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.symbols.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.symbols.contains_key(symbol)
    }

    /// Symbols in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.symbols.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }

    /// Variables of both sides, first occurrence order.
    pub fn vars(&self) -> Vec<Name> {
        let mut vs = self.lhs.vars();
        for v in self.rhs.vars() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs
    }

    pub fn swapped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    /// Both sides have height at most one.
    pub fn is_linear(&self) -> bool {
        self.lhs.depth() <= 1 && self.rhs.depth() <= 1
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&equation_text(self))
    }
}

/// A finite system of equations over a declared signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub signature: Signature,
    pub equations: Vec<Equation>,
}

impl EquationSystem {
    /// Checks that every application uses a declared symbol with its arity.
    pub fn new(signature: Signature, equations: Vec<Equation>) -> Result<EquationSystem, TermError> {
        for eq in &equations {
            for side in [&eq.lhs, &eq.rhs] {
                for (sym, n) in side.symbols() {
                    match signature.arity(&sym) {
                        None => {
                            return Err(TermError::UndeclaredSymbol {
                                symbol: sym.to_string(),
                                offset: 0,
                            })
                        }
                        Some(a) if a != n => {
                            return Err(TermError::ArityMismatch {
                                symbol: sym.to_string(),
                                expected: a,
                                found: n,
                                offset: 0,
                            })
                        }
                        _ => {}
                    }
                }
                for v in side.vars() {
                    if signature.contains(&v) {
                        return Err(TermError::VariableShadowsSymbol { name: v.to_string() });
                    }
                }
            }
        }
        Ok(EquationSystem { signature, equations })
    }

    /// Parses each entry as an equation chain `(= t1 t2 ...)`.
    pub fn parse(signature: Signature, equations: &[&str]) -> Result<EquationSystem, TermError> {
        let mut bank = TermBank::new();
        let mut eqs = Vec::new();
        for text in equations {
            eqs.extend(parse_equation_chain(text, &signature, &mut bank)?);
        }
        Ok(EquationSystem {
            signature,
            equations: eqs,
        })
    }

    /// Symbols that occur in some equation, in name order.
    pub fn used_symbols(&self) -> Vec<(Name, usize)> {
        let mut out: Vec<(Name, usize)> = Vec::new();
        for eq in &self.equations {
            for side in [&eq.lhs, &eq.rhs] {
                for s in side.symbols() {
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn equation_texts(&self) -> Vec<String> {
        self.equations.iter().map(equation_text).collect()
    }

    /// True when every symbol is linear (height at most one on both sides).
    pub fn is_linear(&self) -> bool {
        self.equations.iter().all(Equation::is_linear)
    }

    /// Appends `f(x,...,x) = x` for every declared symbol.
    pub fn with_idempotency(&self) -> EquationSystem {
        let mut out = self.clone();
        for (sym, n) in self.signature.iter() {
            out.equations.push(idempotency_equation(sym, n));
        }
        out
    }
}

pub fn idempotency_equation(symbol: &Name, arity: usize) -> Equation {
    let x = Term::var(name("x"));
    Equation::new(Term::app(symbol.clone(), alloc::vec![x.clone(); arity]), x)
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, n) in self.signature.iter() {
            writeln!(f, "; {s}/{n}")?;
        }
        for eq in &self.equations {
            writeln!(f, "{eq}")?;
        }
        Ok(())
    }
}

/// Head symbol and variable arguments of a height-one term.
pub(crate) fn flat_application(t: &Term) -> Option<(&Name, Vec<&Name>)> {
    match t.kind() {
        TermKind::App(f, args) => {
            let vars: Option<Vec<&Name>> = args.iter().map(|a| a.as_var()).collect();
            vars.map(|v| (f, v))
        }
        TermKind::Var(_) => None,
    }
}

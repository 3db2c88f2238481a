//! S-expression syntax: terms `(head arg ...)`, equations `(= lhs rhs ...)`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::node::{name, Term, TermBank, TermFn};
use super::system::{Equation, Signature};
use super::TermError;

#[derive(Debug, Clone, PartialEq)]
enum Token<'a> {
    Open(usize),
    Close(usize),
    Atom(&'a str, usize),
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => {
                out.push(Token::Open(i));
                i += 1;
            }
            b')' => {
                out.push(Token::Close(i));
                i += 1;
            }
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_whitespace() || c == b',' => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')' | b';' | b',') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push(Token::Atom(&text[start..i], start));
            }
        }
    }
    out
}

/// Untyped s-expression tree with byte offsets.
#[derive(Debug, Clone)]
enum Sexp<'a> {
    Atom(&'a str, usize),
    List(Vec<Sexp<'a>>, usize),
}

fn read_one<'a>(tokens: &[Token<'a>], pos: &mut usize, text_len: usize) -> Result<Sexp<'a>, TermError> {
    match tokens.get(*pos) {
        None => Err(TermError::UnexpectedEnd { offset: text_len }),
        Some(Token::Close(off)) => Err(TermError::UnexpectedClose { offset: *off }),
        Some(Token::Atom(a, off)) => {
            *pos += 1;
            Ok(Sexp::Atom(a, *off))
        }
        Some(Token::Open(off)) => {
            let open = *off;
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(TermError::Unbalanced { offset: open }),
                    Some(Token::Close(_)) => {
                        *pos += 1;
                        return Ok(Sexp::List(items, open));
                    }
                    Some(_) => items.push(read_one(tokens, pos, text_len)?),
                }
            }
        }
    }
}

fn read_single(text: &str) -> Result<Sexp<'_>, TermError> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(TermError::Empty);
    }
    let mut pos = 0;
    let s = read_one(&tokens, &mut pos, text.len())?;
    if let Some(t) = tokens.get(pos) {
        let offset = match t {
            Token::Open(o) | Token::Close(o) | Token::Atom(_, o) => *o,
        };
        return Err(TermError::TrailingInput { offset });
    }
    Ok(s)
}

fn build(s: &Sexp<'_>, sig: &Signature, bank: &mut TermBank) -> Result<Term, TermError> {
    match s {
        Sexp::Atom(a, off) => match sig.arity(a) {
            Some(arity) => Err(TermError::ArityMismatch {
                symbol: a.to_string(),
                expected: arity,
                found: 0,
                offset: *off,
            }),
            None => Ok(bank.var(name(a))),
        },
        Sexp::List(items, off) => {
            let (head, args) = match items.split_first() {
                None => return Err(TermError::EmptyList { offset: *off }),
                Some(x) => x,
            };
            let head = match head {
                Sexp::Atom(h, _) => *h,
                Sexp::List(_, o) => return Err(TermError::ListHead { offset: *o }),
            };
            let arity = sig.arity(head).ok_or_else(|| TermError::UndeclaredSymbol {
                symbol: head.to_string(),
                offset: *off,
            })?;
            if arity != args.len() {
                return Err(TermError::ArityMismatch {
                    symbol: head.to_string(),
                    expected: arity,
                    found: args.len(),
                    offset: *off,
                });
            }
            let children = args.iter().map(|a| build(a, sig, bank)).collect::<Result<Vec<_>, _>>()?;
            Ok(bank.app(name(head), children))
        }
    }
}

/// Parses a term. Identifiers not declared in `sig` are variables.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, TermError> {
    let mut bank = TermBank::new();
    parse_term_in(text, sig, &mut bank)
}

pub fn parse_term_in(text: &str, sig: &Signature, bank: &mut TermBank) -> Result<Term, TermError> {
    let s = read_single(text)?;
    build(&s, sig, bank)
}

/// Parses `(= t1 t2 ... tk)` into the chain `t1 = t2, t2 = t3, ...`.
pub fn parse_equation_chain(text: &str, sig: &Signature, bank: &mut TermBank) -> Result<Vec<Equation>, TermError> {
    let s = read_single(text)?;
    let (items, off) = match &s {
        Sexp::List(items, off) => (items, *off),
        Sexp::Atom(_, off) => return Err(TermError::NotAnEquation { offset: *off }),
    };
    match items.first() {
        Some(Sexp::Atom("=", _)) => {}
        _ => return Err(TermError::NotAnEquation { offset: off }),
    }
    if items.len() < 3 {
        return Err(TermError::NotAnEquation { offset: off });
    }
    let terms = items[1..].iter().map(|t| build(t, sig, bank)).collect::<Result<Vec<_>, _>>()?;
    Ok(terms
        .windows(2)
        .map(|w| Equation::new(w[0].clone(), w[1].clone()))
        .collect())
}

/// Parses `(fn (p1 ... pk) body)`, the printed form of a [`TermFn`].
pub fn parse_term_fn(text: &str, sig: &Signature) -> Result<TermFn, TermError> {
    let s = read_single(text)?;
    let bad = |offset| TermError::NotATermFn { offset };
    let (items, off) = match &s {
        Sexp::List(items, off) => (items, *off),
        Sexp::Atom(_, off) => return Err(bad(*off)),
    };
    let [Sexp::Atom("fn", _), Sexp::List(params, _), body] = items.as_slice() else {
        return Err(bad(off));
    };
    let params = params
        .iter()
        .map(|p| match p {
            Sexp::Atom(a, _) if sig.arity(a).is_none() => Ok(name(a)),
            Sexp::Atom(_, o) | Sexp::List(_, o) => Err(bad(*o)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let body = build(body, sig, &mut TermBank::new())?;
    Ok(TermFn::new(params, body))
}

/// Formats an equation as `(= lhs rhs)`.
pub fn equation_text(eq: &Equation) -> String {
    alloc::format!("(= {} {})", eq.lhs, eq.rhs)
}

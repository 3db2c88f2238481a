//! Catalogue of named conditions, written with the conventional variables.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::double_loop::{double_loop_rows, double_loop_system};
use super::system::{EquationSystem, Signature};
use super::taylor::row_string;
use super::TermError;

/// Names accepted by [`builtin_system`]; those taking an arity are marked `(n)`.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "maltsev",
        "wnu(n)",
        "cyclic(n)",
        "nu(n)",
        "siggers6",
        "siggers4",
        "double_loop",
        "strong_double_loop",
        "weak_3cube",
        "terminator",
        "strong_terminator",
        "weak_3edge",
        "q_and_c",
        "associativity",
        "idempotency(n)",
    ]
}

fn spaced<I: IntoIterator<Item = S>, S: AsRef<str>>(items: I) -> String {
    let mut out = String::new();
    for (i, s) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(s.as_ref());
    }
    out
}

fn letters(row: &str) -> String {
    spaced(row.chars().map(|c| c.to_string()))
}

fn need_param(name: &str, param: Option<usize>, min: usize) -> Result<usize, TermError> {
    match param {
        Some(n) if n >= min => Ok(n),
        Some(n) => Err(TermError::InvalidParam {
            name: name.to_string(),
            reason: format!("arity {n} is below {min}"),
        }),
        None => Err(TermError::InvalidParam {
            name: name.to_string(),
            reason: "missing arity".to_string(),
        }),
    }
}

fn no_param(name: &str, param: Option<usize>) -> Result<(), TermError> {
    match param {
        None => Ok(()),
        Some(_) => Err(TermError::InvalidParam {
            name: name.to_string(),
            reason: "takes no arity".to_string(),
        }),
    }
}

fn build(symbols: &[(&str, usize)], eqs: &[String]) -> Result<EquationSystem, TermError> {
    let refs: Vec<&str> = eqs.iter().map(String::as_str).collect();
    EquationSystem::parse(Signature::from_pairs(symbols)?, &refs)
}

/// Rows with a single `y` at each position, from the last position to the first.
fn one_y_rows(n: usize) -> Vec<String> {
    (0..n)
        .rev()
        .map(|p| letters(&(0..n).map(|i| if i == p { 'y' } else { 'x' }).collect::<String>()))
        .collect()
}

pub fn builtin_system(name: &str, param: Option<usize>) -> Result<EquationSystem, TermError> {
    match name {
        "maltsev" => {
            no_param(name, param)?;
            build(&[("m", 3)], &["(= (m x x y) y (m y x x))".to_string()])
        }
        "wnu" => {
            let n = need_param(name, param, 2)?;
            let chain = spaced(one_y_rows(n).iter().map(|r| format!("(t {r})")));
            build(&[("t", n)], &[format!("(= {chain})")])
        }
        "nu" => {
            let n = need_param(name, param, 3)?;
            let mut rows = one_y_rows(n);
            rows.reverse();
            let chain = spaced(rows.iter().map(|r| format!("(t {r})")));
            build(&[("t", n)], &[format!("(= {chain} x)")])
        }
        "cyclic" => {
            let n = need_param(name, param, 2)?;
            let xs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let rotated: Vec<&String> = xs[1..].iter().chain(xs.iter().take(1)).collect();
            build(
                &[("t", n)],
                &[format!("(= (t {}) (t {}))", spaced(&xs), spaced(rotated))],
            )
        }
        "idempotency" => {
            let n = need_param(name, param, 1)?;
            build(&[("t", n)], &[format!("(= (t {}) x)", spaced(core::iter::repeat_n("x", n)))])
        }
        "siggers6" => {
            no_param(name, param)?;
            build(&[("s", 6)], &["(= (s x y x z y z) (s y x z x z y))".to_string()])
        }
        "siggers4" => {
            no_param(name, param)?;
            build(&[("s", 4)], &["(= (s r a r e) (s a r e a))".to_string()])
        }
        "double_loop" => {
            no_param(name, param)?;
            Ok(double_loop_system("d"))
        }
        "strong_double_loop" => {
            no_param(name, param)?;
            let rows = double_loop_rows();
            let chain = spaced(rows.iter().map(|r| format!("(d {})", letters(&row_string(r)))));
            build(&[("d", 12)], &[format!("(= {chain})")])
        }
        "weak_3cube" => {
            no_param(name, param)?;
            build(&[("t", 6)], &["(= (t x y y y x x) (t y x y x y x) (t y y x x x y))".to_string()])
        }
        "weak_3edge" => {
            no_param(name, param)?;
            build(&[("e", 4)], &["(= (e y y x x) (e y x y x) (e x x x y))".to_string()])
        }
        "associativity" => {
            no_param(name, param)?;
            build(&[("n", 2)], &["(= (n (n x y) z) (n x (n y z)))".to_string()])
        }
        "q_and_c" => {
            no_param(name, param)?;
            build(
                &[("c", 3), ("q1", 4), ("q2", 4)],
                &[
                    "(= (q1 x y x y) (q1 y x x y) (q2 x y x y) (q2 y x x y))".to_string(),
                    "(= (q1 x x y y) (c x y x))".to_string(),
                    "(= (q2 x x y y) (c y x x))".to_string(),
                ],
            )
        }
        "terminator" | "strong_terminator" => {
            no_param(name, param)?;
            let mut eqs: Vec<String> = alloc::vec![
                "(= (c x y x) (c1 x x y))".to_string(),
                "(= (c y x x) (c2 x x y))".to_string(),
            ];
            for i in 1..=2 {
                eqs.push(format!("(= (c{i} x y x) (c{i}1 x x y))"));
                eqs.push(format!("(= (c{i} y x x) (c{i}2 x x y))"));
            }
            for i in 1..=2 {
                eqs.push(format!("(= (c{i}1 x y x) (c{i}2 x y x))"));
                eqs.push(format!("(= (c{i}1 y x x) (c{i}2 y x x))"));
            }
            if name == "strong_terminator" {
                eqs.push("(= (c11 y x x) (c22 x y x))".to_string());
            }
            let symbols = [("c", 3), ("c1", 3), ("c2", 3), ("c11", 3), ("c12", 3), ("c21", 3), ("c22", 3)];
            build(&symbols, &eqs)
        }
        _ => Err(TermError::UnknownBuiltin { name: name.to_string() }),
    }
}

/// Parses `maltsev`, `wnu(3)`, `wnu3` or `idempotency(2)` style names.
pub fn parse_builtin(spec: &str) -> Result<EquationSystem, TermError> {
    let spec = spec.trim();
    let (base, param) = match spec.find('(') {
        Some(open) => {
            let inner = spec[open + 1..].strip_suffix(')').ok_or_else(|| TermError::UnknownBuiltin { name: spec.to_string() })?;
            let n = inner.trim().parse::<usize>().map_err(|_| TermError::InvalidParam {
                name: spec[..open].to_string(),
                reason: format!("`{inner}` is not a number"),
            })?;
            (&spec[..open], Some(n))
        }
        None => {
            let digits = spec.trim_end_matches(|c: char| c.is_ascii_digit());
            let takes_param = matches!(digits, "wnu" | "cyclic" | "nu" | "idempotency");
            if takes_param && digits.len() < spec.len() {
                (digits, spec[digits.len()..].parse::<usize>().ok())
            } else {
                (spec, None)
            }
        }
    };
    builtin_system(base, param)
}

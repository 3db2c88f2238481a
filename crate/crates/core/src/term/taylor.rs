use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::node::{name, Name, Term, TermBank, TermFn};
use super::system::{flat_application, Equation, EquationSystem, Signature};
use super::TermError;

/// One of the two variables of a two-variable linear equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XY {
    X,
    Y,
}

impl XY {
    pub fn flip(self) -> XY {
        match self {
            XY::X => XY::Y,
            XY::Y => XY::X,
        }
    }

    pub fn var_name(self) -> &'static str {
        match self {
            XY::X => "x",
            XY::Y => "y",
        }
    }

    pub fn from_char(c: char) -> Option<XY> {
        match c {
            'x' | 'X' => Some(XY::X),
            'y' | 'Y' => Some(XY::Y),
            _ => None,
        }
    }
}

impl fmt::Display for XY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.var_name())
    }
}

/// Parses a compact row such as `"xxyx"`.
pub fn xy_row(s: &str) -> Vec<XY> {
    s.chars().map(|c| XY::from_char(c).expect("row letters are x or y")).collect()
}

pub(crate) fn row_string(row: &[XY]) -> String {
    row.iter().map(|v| v.var_name()).collect()
}

/// A system of two-variable equations `t(lhs) = t(rhs)` in which every
/// coordinate is covered by some row whose two sides differ there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorSystem {
    pub symbol: Name,
    pub arity: usize,
    pub rows: Vec<(Vec<XY>, Vec<XY>)>,
    /// `coverage[i]` is a row differing at coordinate `i` (0-based): row `i`
    /// itself when it qualifies, otherwise the first such row.
    pub coverage: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NotTaylorShape {
    #[error("coordinate {coordinate} is not covered by any equation")]
    Uncovered { coordinate: usize },
    #[error("equation {equation} is not of the form t(vars) = t(vars)")]
    NonLinear { equation: usize },
    #[error("equation {equation} uses symbol `{found}`")]
    WrongSymbol { equation: usize, found: String },
    #[error("equation {equation} has more than two variables")]
    TooManyVariables { equation: usize },
    #[error("symbol `{0}` is not declared")]
    UnknownSymbol(String),
    #[error("no equations")]
    Empty,
}

impl TaylorSystem {
    /// Builds the system from rows, computing coverage.
    pub fn from_rows(symbol: &str, rows: Vec<(Vec<XY>, Vec<XY>)>) -> Result<TaylorSystem, NotTaylorShape> {
        let arity = match rows.first() {
            Some((l, _)) => l.len(),
            None => return Err(NotTaylorShape::Empty),
        };
        for (e, (l, r)) in rows.iter().enumerate() {
            if l.len() != arity || r.len() != arity {
                return Err(NotTaylorShape::NonLinear { equation: e });
            }
        }
        let mut coverage = Vec::with_capacity(arity);
        for i in 0..arity {
            let positional = rows.get(i).filter(|(l, r)| l[i] != r[i]).map(|_| i);
            match positional.or_else(|| rows.iter().position(|(l, r)| l[i] != r[i])) {
                Some(r) => coverage.push(r),
                None => return Err(NotTaylorShape::Uncovered { coordinate: i + 1 }),
            }
        }
        Ok(TaylorSystem {
            symbol: name(symbol),
            arity,
            rows,
            coverage,
        })
    }

    /// The row covering coordinate `i`, renamed so that its left side has `x` at `i`.
    pub fn oriented_row(&self, i: usize) -> (Vec<XY>, Vec<XY>) {
        let (l, r) = &self.rows[self.coverage[i]];
        if l[i] == XY::X {
            (l.clone(), r.clone())
        } else {
            (l.iter().map(|v| v.flip()).collect(), r.iter().map(|v| v.flip()).collect())
        }
    }

    pub fn to_system(&self) -> EquationSystem {
        let sig = Signature::from_pairs(&[(&self.symbol, self.arity)]).expect("valid symbol");
        let mut bank = TermBank::new();
        let equations = self
            .rows
            .iter()
            .map(|(l, r)| Equation::new(xy_app(&mut bank, &self.symbol, l), xy_app(&mut bank, &self.symbol, r)))
            .collect();
        EquationSystem { signature: sig, equations }
    }
}

fn xy_app(bank: &mut TermBank, symbol: &Name, row: &[XY]) -> Term {
    let args = row.iter().map(|v| bank.var(v.var_name())).collect();
    bank.app(symbol.clone(), args)
}

/// Recognizes a Taylor system for `symbol`.
///
/// Each equation must be `symbol(vars) = symbol(vars)` with at most two
/// variables. Variables named `x` and `y` are read as themselves; otherwise
/// the first variable of the equation plays `x`.
pub fn is_taylor_shape(sys: &EquationSystem, symbol: &str) -> Result<TaylorSystem, NotTaylorShape> {
    if !sys.signature.contains(symbol) {
        return Err(NotTaylorShape::UnknownSymbol(symbol.to_string()));
    }
    let mut rows = Vec::new();
    for (e, eq) in sys.equations.iter().enumerate() {
        let (lf, la) = flat_application(&eq.lhs).ok_or(NotTaylorShape::NonLinear { equation: e })?;
        let (rf, ra) = flat_application(&eq.rhs).ok_or(NotTaylorShape::NonLinear { equation: e })?;
        for f in [lf, rf] {
            if &**f != symbol {
                return Err(NotTaylorShape::WrongSymbol {
                    equation: e,
                    found: f.to_string(),
                });
            }
        }
        let vars = eq.vars();
        if vars.len() > 2 {
            return Err(NotTaylorShape::TooManyVariables { equation: e });
        }
        let conventional = vars.iter().all(|v| &**v == "x" || &**v == "y");
        let to_xy = |v: &Name| -> XY {
            if conventional {
                XY::from_char(v.chars().next().unwrap_or('x')).unwrap_or(XY::X)
            } else if *v == vars[0] {
                XY::X
            } else {
                XY::Y
            }
        };
        rows.push((la.iter().map(|v| to_xy(v)).collect(), ra.iter().map(|v| to_xy(v)).collect()));
    }
    TaylorSystem::from_rows(symbol, rows)
}

fn indexed_vars(bank: &mut TermBank, n: usize) -> Vec<Term> {
    (1..=n).map(|i| bank.var(alloc::format!("x{i}").as_str())).collect()
}

/// Two linear equations in the `n²`-ary symbol `s = t*t`: the first follows
/// from idempotency of `t`, the second from the Taylor rows.
pub fn taylor_to_pair_system(ts: &TaylorSystem) -> Result<EquationSystem, TermError> {
    check_valid(ts)?;
    let n = ts.arity;
    let s = name("s");
    let mut bank = TermBank::new();
    let xs = indexed_vars(&mut bank, n);

    let mut lhs1 = Vec::with_capacity(n * n);
    let mut rhs1 = Vec::with_capacity(n * n);
    for i in 0..n {
        lhs1.extend(xs.iter().cloned());
        rhs1.extend(core::iter::repeat_n(xs[i].clone(), n));
    }
    let (l2, r2) = concatenated_rows(ts);
    let to_terms = |bank: &mut TermBank, row: &[XY]| -> Vec<Term> { row.iter().map(|v| bank.var(v.var_name())).collect() };
    let lhs2 = to_terms(&mut bank, &l2);
    let rhs2 = to_terms(&mut bank, &r2);

    let equations = alloc::vec![
        Equation::new(bank.app(s.clone(), lhs1), bank.app(s.clone(), rhs1)),
        Equation::new(bank.app(s.clone(), lhs2), bank.app(s.clone(), rhs2)),
    ];
    EquationSystem::new(Signature::from_pairs(&[("s", n * n)])?, equations)
}

fn concatenated_rows(ts: &TaylorSystem) -> (Vec<XY>, Vec<XY>) {
    let mut l = Vec::new();
    let mut r = Vec::new();
    for i in 0..ts.arity {
        let (a, b) = ts.oriented_row(i);
        l.extend(a);
        r.extend(b);
    }
    (l, r)
}

/// The Taylor-derived equation with `s` unfolded to `t*t`: a single
/// equation of depth 2 in the signature `{t}`.
pub fn single_nontrivial_equation(ts: &TaylorSystem) -> Result<Equation, TermError> {
    check_valid(ts)?;
    let t = TermFn::symbol(&ts.symbol, ts.arity);
    let mut bank = TermBank::new();
    let side = |bank: &mut TermBank, pick_left: bool| -> Term {
        let blocks: Vec<Term> = (0..ts.arity)
            .map(|i| {
                let (l, r) = ts.oriented_row(i);
                let row = if pick_left { l } else { r };
                let args: Vec<Term> = row.iter().map(|v| bank.var(v.var_name())).collect();
                bank.share(&t.apply(&args))
            })
            .collect();
        bank.share(&t.apply(&blocks))
    };
    let lhs = side(&mut bank, true);
    let rhs = side(&mut bank, false);
    Ok(Equation::new(lhs, rhs))
}

fn check_valid(ts: &TaylorSystem) -> Result<(), TermError> {
    match TaylorSystem::from_rows(&ts.symbol, ts.rows.clone()) {
        Ok(fresh) if fresh.arity == ts.arity && ts.coverage.len() == ts.arity => {
            for (i, &r) in ts.coverage.iter().enumerate() {
                let (l, rr) = ts.rows.get(r).ok_or_else(|| TermError::WrongShape("coverage row out of range".to_string()))?;
                if l[i] == rr[i] {
                    return Err(TermError::WrongShape(alloc::format!("coverage of coordinate {} is wrong", i + 1)));
                }
            }
            Ok(())
        }
        Ok(_) => Err(TermError::WrongShape("arity and coverage disagree".to_string())),
        Err(e) => Err(TermError::WrongShape(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::term::check_trivial;

    fn maltsev_derived() -> EquationSystem {
        EquationSystem::parse(
            Signature::from_pairs(&[("m", 3)]).unwrap(),
            &["(= (m x x x) (m y y x))", "(= (m x x x) (m y y x))", "(= (m x x x) (m x y y))"],
        )
        .unwrap()
    }

    #[test]
    fn maltsev_rows_cover_all_coordinates() {
        let ts = is_taylor_shape(&maltsev_derived(), "m").unwrap();
        assert_eq!(ts.arity, 3);
        assert_eq!(ts.coverage, [0, 1, 2]);
    }

    #[test]
    fn siggers4_substitutions() {
        let sys = EquationSystem::parse(
            Signature::from_pairs(&[("s", 4)]).unwrap(),
            &[
                "(= (s x y x x) (s y x x y))",
                "(= (s y x y x) (s x y x x))",
                "(= (s x y x y) (s y x y y))",
                "(= (s y y y x) (s y y x y))",
            ],
        )
        .unwrap();
        assert!(is_taylor_shape(&sys, "s").is_ok());
    }

    #[test]
    fn uncovered_coordinate_reported() {
        let sys = EquationSystem::parse(
            Signature::from_pairs(&[("t", 3)]).unwrap(),
            &["(= (t x x y) (t y x x))"],
        )
        .unwrap();
        assert_eq!(is_taylor_shape(&sys, "t"), Err(NotTaylorShape::Uncovered { coordinate: 2 }));
    }

    #[test]
    fn nonlinear_rejected() {
        let sys = EquationSystem::parse(
            Signature::from_pairs(&[("t", 2)]).unwrap(),
            &["(= (t (t x y) y) (t y x))"],
        )
        .unwrap();
        assert_eq!(is_taylor_shape(&sys, "t"), Err(NotTaylorShape::NonLinear { equation: 0 }));
    }

    #[test]
    fn pair_system_shape() {
        let ts = is_taylor_shape(&maltsev_derived(), "m").unwrap();
        let pair = taylor_to_pair_system(&ts).unwrap();
        assert_eq!(pair.signature.arity("s"), Some(9));
        assert_eq!(
            pair.equations[0].to_string(),
            "(= (s x1 x2 x3 x1 x2 x3 x1 x2 x3) (s x1 x1 x1 x2 x2 x2 x3 x3 x3))"
        );
        assert_eq!(pair.equations[1].to_string(), "(= (s x x x x x x x x x) (s y y x y y x x y y))");
        assert_eq!(check_trivial(&pair), None);
    }

    #[test]
    fn single_equation_is_nontrivial() {
        let ts = is_taylor_shape(&maltsev_derived(), "m").unwrap();
        let eq = single_nontrivial_equation(&ts).unwrap();
        assert_eq!(eq.lhs.depth(), 2);
        assert_eq!(eq.rhs.depth(), 2);
        let sys = EquationSystem::new(Signature::from_pairs(&[("m", 3)]).unwrap(), alloc::vec![eq]).unwrap();
        assert_eq!(check_trivial(&sys), None);
    }
}

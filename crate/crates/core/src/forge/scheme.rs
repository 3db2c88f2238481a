//! Syntactic passages between conditions: no algebra is involved.

use alloc::vec::Vec;

use crate::term::{double_loop_rows, name, star_compose, ColumnMatrix, Name, Term, TermBank, TermFn, XY};

/// Rows `e1, e2` (first two double loop rows) and `f1, f2` (last two),
/// combined by `x ⊕ x = y ⊕ y = x`, `x ⊕ y = y ⊕ x = y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubstitutionScheme {
    pub e1: [XY; 12],
    pub e2: [XY; 12],
    pub f1: [XY; 12],
    pub f2: [XY; 12],
}

impl Default for SubstitutionScheme {
    fn default() -> Self {
        let [e1, e2, f1, f2] = double_loop_rows();
        SubstitutionScheme { e1, e2, f1, f2 }
    }
}

impl SubstitutionScheme {
    pub fn xor(a: XY, b: XY) -> XY {
        if a == b {
            XY::X
        } else {
            XY::Y
        }
    }

    /// The four substitutions at position `(i, j, k)` of `d*d*d`:
    /// `e1[j]⊕f1[k]`, `e2[j]⊕f1[k]`, `f1[j]⊕e1[i]`, `f2[j]⊕e1[i]`.
    pub fn column(&self, i: usize, j: usize, k: usize) -> [XY; 4] {
        let x = Self::xor;
        [
            x(self.e1[j], self.f1[k]),
            x(self.e2[j], self.f1[k]),
            x(self.f1[j], self.e1[i]),
            x(self.f2[j], self.e1[i]),
        ]
    }

    /// Columns of all 1728 positions, `i` outermost.
    pub fn matrix(&self) -> ColumnMatrix {
        let mut columns = Vec::with_capacity(1728);
        for i in 0..12 {
            for j in 0..12 {
                for k in 0..12 {
                    columns.push(self.column(i, j, k));
                }
            }
        }
        ColumnMatrix { columns }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongDoubleLoop {
    /// 12-ary term of depth 3 over the double loop symbol.
    pub term: TermFn,
    pub matrix: ColumnMatrix,
    /// Canonical slot (0-based) of each position of `d*d*d`.
    pub slots: Vec<usize>,
    /// Slots no position uses; their parameters are dummies.
    pub unused_slots: Vec<usize>,
}

/// From a double loop symbol `d`, the strong double loop term obtained by
/// substituting into `d*d*d` along [`SubstitutionScheme`] and merging
/// positions with equal columns into one canonical slot.
pub fn strong_double_loop_from_double_loop(symbol: &str) -> StrongDoubleLoop {
    let matrix = SubstitutionScheme::default().matrix();
    assert!(
        matrix.first_forbidden().is_none(),
        "substitution produced a column with a1 = a2 and b1 = b2"
    );
    let cols = crate::term::canonical_columns();
    let slots: Vec<usize> = matrix
        .columns
        .iter()
        .map(|c| cols.iter().position(|k| k == c).expect("allowed column"))
        .collect();
    let counts = matrix.slot_counts();
    let unused_slots = (0..12).filter(|&s| counts[s] == 0).collect();

    let d = TermFn::symbol(symbol, 12);
    let cube = star_compose(&d, &star_compose(&d, &d));
    let params: Vec<Name> = (1..=12).map(|i| name(&alloc::format!("x{i}"))).collect();
    let mut bank = TermBank::new();
    let args: Vec<Term> = slots.iter().map(|&s| bank.var(params[s].clone())).collect();
    let body = bank.share(&cube.apply(&args));
    StrongDoubleLoop {
        term: TermFn::new(params, body),
        matrix,
        slots,
        unused_slots,
    }
}

fn defined(params: &str, symbol: &str, args: &str) -> TermFn {
    let ps: Vec<Name> = params.split(' ').map(name).collect();
    let body = Term::app(name(symbol), args.split(' ').map(|a| Term::var(name(a))).collect());
    TermFn::new(ps, body)
}

fn through(params: &str, f: &TermFn, args: &str) -> TermFn {
    let ps: Vec<Name> = params.split(' ').map(name).collect();
    let args: Vec<Term> = args.split(' ').map(|a| Term::var(name(a))).collect();
    TermFn::new(ps, f.apply(&args))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcTerms {
    pub c: TermFn,
    pub q1: TermFn,
    pub q2: TermFn,
}

impl QcTerms {
    pub fn binding(&self) -> Vec<(Name, TermFn)> {
        alloc::vec![
            (name("c"), self.c.clone()),
            (name("q1"), self.q1.clone()),
            (name("q2"), self.q2.clone()),
        ]
    }
}

/// `c(x,y,z) = d(y,y,x,z,z,x,x,z,z,x,y,y)`,
/// `q1(u,v,x,y) = d(x,x,u,u,u,u,v,v,v,v,y,y)`,
/// `q2(u,v,x,y) = d(u,v,x,u,v,y,x,u,v,y,u,v)`.
pub fn q_and_c_from_strong_double_loop(symbol: &str) -> QcTerms {
    QcTerms {
        c: defined("x y z", symbol, "y y x z z x x z z x y y"),
        q1: defined("u v x y", symbol, "x x u u u u v v v v y y"),
        q2: defined("u v x y", symbol, "u v x u v y x u v y u v"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminatorTerms {
    pub c: TermFn,
    pub c1: TermFn,
    pub c2: TermFn,
    pub c11: TermFn,
    pub c12: TermFn,
    pub c21: TermFn,
    pub c22: TermFn,
}

impl TerminatorTerms {
    pub fn binding(&self) -> Vec<(Name, TermFn)> {
        [
            ("c", &self.c),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c11", &self.c11),
            ("c12", &self.c12),
            ("c21", &self.c21),
            ("c22", &self.c22),
        ]
        .into_iter()
        .map(|(s, t)| (name(s), t.clone()))
        .collect()
    }
}

/// Terminator terms from `c, q1, q2`; `c21` and `c22` take their
/// parameters in the order `(y, x, z)`.
pub fn terminator_from_q(qc: &QcTerms) -> TerminatorTerms {
    TerminatorTerms {
        c: qc.c.clone(),
        c1: through("x y z", &qc.q1, "x y z z"),
        c2: through("x y z", &qc.q2, "x y z z"),
        c11: through("x y z", &qc.q1, "x z y x"),
        c21: through("y x z", &qc.q2, "x z y x"),
        c12: through("x y z", &qc.q1, "z x y x"),
        c22: through("y x z", &qc.q2, "z x y x"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{builtin_system, check_trivial, xy_row};
    use alloc::string::ToString;

    fn row_instance(symbol: &str, row: &[XY; 12]) -> Term {
        Term::app(name(symbol), row.iter().map(|v| Term::var(name(v.var_name()))).collect())
    }

    #[test]
    fn xor_table() {
        use SubstitutionScheme as S;
        assert_eq!(S::xor(XY::X, XY::X), XY::X);
        assert_eq!(S::xor(XY::Y, XY::Y), XY::X);
        assert_eq!(S::xor(XY::X, XY::Y), XY::Y);
        assert_eq!(S::xor(XY::Y, XY::X), XY::Y);
    }

    #[test]
    fn columns_are_allowed() {
        let s = strong_double_loop_from_double_loop("d");
        assert_eq!(s.matrix.columns.len(), 1728);
        assert!(s.matrix.first_forbidden().is_none());
        assert_eq!(s.matrix.slot_counts().iter().sum::<usize>(), 1728);
        assert_eq!(s.term.body.depth(), 3);
        assert_eq!(s.term.arity(), 12);
    }

    #[test]
    fn output_system_is_nontrivial() {
        let sys = builtin_system("strong_double_loop", None).unwrap();
        assert!(check_trivial(&sys).is_none());
        let sys = builtin_system("strong_terminator", None).unwrap();
        assert!(check_trivial(&sys).is_none());
    }

    #[test]
    fn q_rows() {
        let qc = q_and_c_from_strong_double_loop("d");
        let rows = double_loop_rows();
        assert_eq!(qc.q1.apply_vars(&["x", "y", "x", "y"]), row_instance("d", &rows[0]));
        assert_eq!(qc.q2.apply_vars(&["y", "x", "x", "y"]), row_instance("d", &rows[3]));
        assert_eq!(rows[0].to_vec(), xy_row("xxxxxxyyyyyy"));
    }

    #[test]
    fn golden_terminator() {
        let t = terminator_from_q(&q_and_c_from_strong_double_loop("d"));
        assert_eq!(t.c.to_string(), "(fn (x y z) (d y y x z z x x z z x y y))");
        assert_eq!(t.c1.to_string(), "(fn (x y z) (d z z x x x x y y y y z z))");
        assert_eq!(t.c21.to_string(), "(fn (y x z) (d x z y x z x y x z x x z))");
        assert_eq!(t.c22.to_string(), "(fn (y x z) (d z x y z x x y z x x z x))");
    }
}

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::node::{name, Name, Term, TermBank, TermFn};
use super::system::{flat_application, Equation, EquationSystem, Signature};
use super::taylor::XY;
use super::TermError;

/// The 12 columns `(a1,a2,b1,b2)` over `{x,y}` with `a1 != a2` or
/// `b1 != b2`, in lexicographic order with `x < y`. Column `i` is slot `i`.
pub fn canonical_columns() -> [[XY; 4]; 12] {
    let mut out = [[XY::X; 4]; 12];
    let mut k = 0;
    for code in 0..16u8 {
        let col = [0, 1, 2, 3].map(|bit| if code >> (3 - bit) & 1 == 1 { XY::Y } else { XY::X });
        if col[0] == col[1] && col[2] == col[3] {
            continue;
        }
        out[k] = col;
        k += 1;
    }
    out
}

/// Rows `r1..r4` of the double loop matrix.
pub fn double_loop_rows() -> [[XY; 12]; 4] {
    let cols = canonical_columns();
    let mut rows = [[XY::X; 12]; 4];
    for (s, col) in cols.iter().enumerate() {
        for r in 0..4 {
            rows[r][s] = col[r];
        }
    }
    rows
}

pub(crate) fn slot_of(col: [XY; 4]) -> Option<usize> {
    canonical_columns().iter().position(|c| *c == col)
}

/// The `4 x n` matrix of a pair of two-variable linear equations, stored
/// column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnMatrix {
    pub columns: Vec<[XY; 4]>,
}

impl ColumnMatrix {
    pub fn from_rows(rows: [&[XY]; 4]) -> ColumnMatrix {
        let n = rows[0].len();
        ColumnMatrix {
            columns: (0..n).map(|p| [rows[0][p], rows[1][p], rows[2][p], rows[3][p]]).collect(),
        }
    }

    pub fn row(&self, r: usize) -> Vec<XY> {
        self.columns.iter().map(|c| c[r]).collect()
    }

    /// First position (0-based) whose column has `a1 = a2` and `b1 = b2`.
    pub fn first_forbidden(&self) -> Option<usize> {
        self.columns.iter().position(|c| c[0] == c[1] && c[2] == c[3])
    }

    /// How often each canonical slot occurs.
    pub fn slot_counts(&self) -> [usize; 12] {
        let mut counts = [0; 12];
        for c in &self.columns {
            if let Some(s) = slot_of(*c) {
                counts[s] += 1;
            }
        }
        counts
    }
}

/// Result of normalizing a two-equation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    /// The projection onto `position` (1-based) satisfies both equations.
    TrivialInput { position: usize },
    DoubleLoop {
        /// Canonical double loop system in the input's symbol.
        system: EquationSystem,
        symbol: Name,
        /// Canonical slot (0-based) of each input position.
        slot_of_position: Vec<usize>,
        /// Slots no input position maps to.
        missing_slots: Vec<usize>,
        matrix: ColumnMatrix,
    },
}

impl Normalized {
    /// From a term `t` satisfying the input system, the 12-ary term
    /// `d(v1..v12) = t(v_slot(1), ..., v_slot(n))` satisfying the double loop
    /// equations. Missing slots are dummy arguments.
    pub fn double_loop_binding(&self, t: &TermFn) -> Option<TermFn> {
        match self {
            Normalized::TrivialInput { .. } => None,
            Normalized::DoubleLoop { slot_of_position, .. } => {
                let params: Vec<Name> = (1..=12).map(|i| name(&format!("v{i}"))).collect();
                let args: Vec<Term> = slot_of_position.iter().map(|&s| Term::var(params[s].clone())).collect();
                Some(TermFn::new(params, t.apply(&args)))
            }
        }
    }

    /// From a double loop term `d`, a term for the input symbol satisfying
    /// the input system. Only possible when every slot is used.
    pub fn input_binding(&self, d: &TermFn) -> Option<TermFn> {
        match self {
            Normalized::DoubleLoop {
                slot_of_position,
                missing_slots,
                ..
            } if missing_slots.is_empty() => {
                let n = slot_of_position.len();
                let params: Vec<Name> = (1..=n).map(|i| name(&format!("x{i}"))).collect();
                let args: Vec<Term> = (0..12)
                    .map(|s| {
                        let p = slot_of_position.iter().position(|&q| q == s).expect("slot used");
                        Term::var(params[p].clone())
                    })
                    .collect();
                Some(TermFn::new(params, d.apply(&args)))
            }
            _ => None,
        }
    }
}

/// The canonical double loop system `d(r1) = d(r2), d(r3) = d(r4)`.
pub fn double_loop_system(symbol: &str) -> EquationSystem {
    let rows = double_loop_rows();
    let mut bank = TermBank::new();
    let mut app = |row: &[XY; 12]| {
        let args = row.iter().map(|v| bank.var(v.var_name())).collect();
        bank.app(symbol, args)
    };
    let r: Vec<Term> = rows.iter().map(&mut app).collect();
    EquationSystem {
        signature: Signature::from_pairs(&[(symbol, 12)]).expect("valid symbol"),
        equations: alloc::vec![Equation::new(r[0].clone(), r[1].clone()), Equation::new(r[2].clone(), r[3].clone())],
    }
}

fn xy_sides(eq: &Equation, index: usize) -> Result<(Name, Vec<XY>, Vec<XY>), TermError> {
    let shape = |what: &str| TermError::WrongShape(format!("equation {index}: {what}"));
    let (lf, la) = flat_application(&eq.lhs).ok_or_else(|| shape("not a flat application"))?;
    let (rf, ra) = flat_application(&eq.rhs).ok_or_else(|| shape("not a flat application"))?;
    if lf != rf {
        return Err(shape("two different symbols"));
    }
    let vars = eq.vars();
    if vars.len() > 2 {
        return Err(shape("more than two variables"));
    }
    let conventional = vars.iter().all(|v| &**v == "x" || &**v == "y");
    let to_xy = |v: &Name| {
        if conventional {
            if &**v == "y" {
                XY::Y
            } else {
                XY::X
            }
        } else if *v == vars[0] {
            XY::X
        } else {
            XY::Y
        }
    };
    Ok((
        lf.clone(),
        la.iter().map(|v| to_xy(v)).collect(),
        ra.iter().map(|v| to_xy(v)).collect(),
    ))
}

/// Rewrites a system of two linear equations in one symbol and two
/// variables into the canonical double loop system.
pub fn normalize_two_equation(sys: &EquationSystem) -> Result<Normalized, TermError> {
    if sys.equations.len() != 2 {
        return Err(TermError::WrongShape(format!("expected 2 equations, found {}", sys.equations.len())));
    }
    let (f1, a1, a2) = xy_sides(&sys.equations[0], 0)?;
    let (f2, b1, b2) = xy_sides(&sys.equations[1], 1)?;
    if f1 != f2 {
        return Err(TermError::WrongShape("equations use different symbols".to_string()));
    }
    let matrix = ColumnMatrix::from_rows([&a1, &a2, &b1, &b2]);
    if let Some(p) = matrix.first_forbidden() {
        return Ok(Normalized::TrivialInput { position: p + 1 });
    }
    let slot_of_position: Vec<usize> = matrix.columns.iter().map(|c| slot_of(*c).expect("allowed column")).collect();
    let missing_slots = (0..12).filter(|s| !slot_of_position.contains(s)).collect();
    Ok(Normalized::DoubleLoop {
        system: double_loop_system(&f1),
        symbol: f1,
        slot_of_position,
        missing_slots,
        matrix,
    })
}

//! Shape predicates on single operations and the Taylor operation test.

use alloc::vec::Vec;
use core::fmt;

use super::eval::{Failure, Model};
use super::{AlgebraError, Elem, FiniteAlgebra, OperationTable};
use crate::term::{builtin_system, EquationSystem, NotTaylorShape, TaylorSystem, XY};
use crate::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Idempotent,
    Nu,
    Wnu,
    Cyclic,
    Siggers6,
    Siggers4,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 6] = [
        ShapeKind::Idempotent,
        ShapeKind::Nu,
        ShapeKind::Wnu,
        ShapeKind::Cyclic,
        ShapeKind::Siggers6,
        ShapeKind::Siggers4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShapeKind::Idempotent => "idempotent",
            ShapeKind::Nu => "nu",
            ShapeKind::Wnu => "wnu",
            ShapeKind::Cyclic => "cyclic",
            ShapeKind::Siggers6 => "siggers6",
            ShapeKind::Siggers4 => "siggers4",
        }
    }

    pub fn parse(s: &str) -> Option<ShapeKind> {
        ShapeKind::ALL.into_iter().find(|k| k.label() == s)
    }

    /// Defining equations for an operation of the given arity, in symbol `t`
    /// (`s` for the Siggers shapes).
    pub fn system(self, arity: usize) -> Result<EquationSystem, AlgebraError> {
        let bad = || AlgebraError::ShapeArity {
            kind: self.label(),
            arity,
        };
        let sys = match self {
            ShapeKind::Idempotent => builtin_system("idempotency", Some(arity)),
            ShapeKind::Nu if arity >= 3 => builtin_system("nu", Some(arity)),
            ShapeKind::Wnu if arity >= 2 => builtin_system("wnu", Some(arity)),
            ShapeKind::Cyclic if arity >= 2 => builtin_system("cyclic", Some(arity)),
            ShapeKind::Siggers6 if arity == 6 => builtin_system("siggers6", None),
            ShapeKind::Siggers4 if arity == 4 => builtin_system("siggers4", None),
            _ => return Err(bad()),
        };
        sys.map_err(|_| bad())
    }

    fn symbol(self) -> &'static str {
        match self {
            ShapeKind::Siggers6 | ShapeKind::Siggers4 => "s",
            _ => "t",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// First violation of the defining equations of `kind`, if any.
pub fn shape_failure(op: &OperationTable, kind: ShapeKind) -> Result<Option<Failure>, AlgebraError> {
    let sys = kind.system(op.arity())?;
    let alg = FiniteAlgebra::new(op.size())?.with_op(kind.symbol(), op.clone())?;
    Model::plain(&alg).system_failure(&sys)
}

/// Exhaustive check of the defining equations of `kind`.
pub fn check_shape(op: &OperationTable, kind: ShapeKind) -> Result<bool, AlgebraError> {
    Ok(shape_failure(op, kind)?.is_none())
}

/// Outcome of [`is_taylor_operation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorReport {
    pub verdict: Result<TaylorSystem, NotTaylorShape>,
    /// Taylor systems are meant for idempotent operations; this flags the
    /// case where the operation is not.
    pub idempotent: bool,
}

impl TaylorReport {
    pub fn is_taylor(&self) -> bool {
        self.verdict.is_ok()
    }
}

/// Arity bound for [`is_taylor_operation`] (it inspects all `2^n` patterns).
pub const TAYLOR_MAX_ARITY: usize = 20;

/// Row `p` as a pattern: bit `n-1-i` set means `y` at position `i`, so that
/// numeric order is lexicographic order with `x < y`.
fn pattern_row(p: usize, n: usize) -> Vec<XY> {
    (0..n).map(|i| if p >> (n - 1 - i) & 1 == 1 { XY::Y } else { XY::X }).collect()
}

/// Decides whether `op` satisfies some Taylor system.
///
/// Every pattern in `{x,y}^n` induces a binary operation; two patterns give
/// a valid equation exactly when they induce the same one. For each
/// coordinate `i` the first pattern with `x` at `i` whose class contains a
/// pattern with `y` at `i` is used, paired with the first such partner.
pub fn is_taylor_operation(op: &OperationTable) -> Result<TaylorReport, AlgebraError> {
    let n = op.arity();
    if n > TAYLOR_MAX_ARITY {
        return Err(AlgebraError::TooLarge { size: op.size(), arity: n });
    }
    let size = op.size();
    let mut class_of: Vec<u32> = Vec::with_capacity(1 << n);
    let mut classes: HashMap<Vec<Elem>, u32> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut args = alloc::vec![0 as Elem; n];
    for p in 0..(1usize << n) {
        let mut induced = Vec::with_capacity(size * size);
        for a in 0..size as Elem {
            for b in 0..size as Elem {
                for (i, slot) in args.iter_mut().enumerate() {
                    *slot = if p >> (n - 1 - i) & 1 == 1 { b } else { a };
                }
                induced.push(op.get(&args));
            }
        }
        let next = classes.len() as u32;
        let c = *classes.entry(induced).or_insert(next);
        if c == next {
            members.push(Vec::new());
        }
        members[c as usize].push(p);
        class_of.push(c);
    }

    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let bit = 1usize << (n - 1 - i);
        let pair = (0..(1usize << n))
            .filter(|p| p & bit == 0)
            .find_map(|p| members[class_of[p] as usize].iter().find(|&&q| q & bit != 0).map(|&q| (p, q)));
        match pair {
            Some((p, q)) => rows.push((pattern_row(p, n), pattern_row(q, n))),
            None => {
                return Ok(TaylorReport {
                    verdict: Err(NotTaylorShape::Uncovered { coordinate: i + 1 }),
                    idempotent: op.is_idempotent(),
                })
            }
        }
    }
    Ok(TaylorReport {
        verdict: TaylorSystem::from_rows("t", rows),
        idempotent: op.is_idempotent(),
    })
}

/// Checks a Taylor system against an operation table.
pub fn taylor_system_holds(op: &OperationTable, ts: &TaylorSystem) -> Result<bool, AlgebraError> {
    let alg = FiniteAlgebra::new(op.size())?.with_op(&ts.symbol, op.clone())?;
    let failure = Model::plain(&alg).system_failure(&ts.to_system())?;
    Ok(failure.is_none())
}

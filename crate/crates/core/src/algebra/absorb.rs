//! Compatibility and absorption predicates.

use alloc::vec::Vec;

use super::closure::{for_each_image, Residual};
use super::table::for_each_tuple;
use super::{AlgebraError, Elem, OperationTable, Relation};

/// Tuples of `R` (one per argument) whose coordinatewise image leaves `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityFailure {
    pub args: Vec<Vec<Elem>>,
    pub image: Vec<Elem>,
}

/// First choice of tuples witnessing that `op` does not preserve `r`.
pub fn compatibility_failure(op: &OperationTable, r: &Relation) -> Option<CompatibilityFailure> {
    let tuples = r.tuples();
    if tuples.is_empty() {
        return None;
    }
    let m = r.power();
    let flat: Vec<Elem> = tuples.iter().flatten().copied().collect();
    let res = Residual::new(op);
    let mut budget = usize::MAX;
    let mut failure = None;
    let _ = for_each_image(&res, m, &flat, &mut budget, |image, args| {
        if r.contains(image) {
            return true;
        }
        failure = Some(CompatibilityFailure {
            args: args.iter().map(|&a| tuples[a as usize].clone()).collect(),
            image: image.to_vec(),
        });
        false
    });
    failure
}

/// `op` applied coordinatewise maps tuples of `r` into `r`.
pub fn compatible(op: &OperationTable, r: &Relation) -> bool {
    compatibility_failure(op, r).is_none()
}

fn mask(size: usize, set: &[Elem]) -> Vec<bool> {
    let mut m = alloc::vec![false; size];
    for &a in set {
        m[a as usize] = true;
    }
    m
}

/// First argument tuple with entries from `x` except one entry from `y`
/// whose value leaves `x`.
pub fn absorption_failure(x: &[Elem], y: &[Elem], op: &OperationTable) -> Option<Vec<Elem>> {
    let inside = mask(op.size(), x);
    let k = op.arity();
    if y.is_empty() || (x.is_empty() && k > 1) {
        return None;
    }
    let mut args = alloc::vec![0 as Elem; k];
    for i in 0..k {
        // Positions other than i range over x, position i over y.
        let radices: Vec<usize> = (0..k).map(|p| if p == i { y.len() } else { x.len() }).collect();
        let mut pick = alloc::vec![0usize; k];
        loop {
            for p in 0..k {
                args[p] = if p == i { y[pick[p]] } else { x[pick[p]] };
            }
            if !inside[op.get(&args) as usize] {
                return Some(args);
            }
            if !next_mixed(&mut pick, &radices) {
                break;
            }
        }
    }
    None
}

/// Advances a mixed-radix counter; false after the last tuple.
fn next_mixed(pick: &mut [usize], radices: &[usize]) -> bool {
    for p in (0..pick.len()).rev() {
        pick[p] += 1;
        if pick[p] < radices[p] {
            return true;
        }
        pick[p] = 0;
    }
    false
}

/// `x` absorbs `y` with respect to `op`.
pub fn absorbs(x: &[Elem], y: &[Elem], op: &OperationTable) -> bool {
    absorption_failure(x, y, op).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodFailure {
    pub vertex: Elem,
    pub args: Vec<Elem>,
}

/// First non-isolated `x` whose neighborhood does not absorb `{x} ∪ x⁺`.
pub fn enough_absorption_failure(r: &Relation, op: &OperationTable) -> Result<Option<NeighborhoodFailure>, AlgebraError> {
    if let Some((a, b)) = r.symmetry_failure() {
        return Err(AlgebraError::NotSymmetric { a, b });
    }
    for x in r.non_isolated() {
        let nbhd = r.out_neighbors(x);
        let mut with_x = nbhd.clone();
        if !with_x.contains(&x) {
            with_x.push(x);
            with_x.sort_unstable();
        }
        if let Some(args) = absorption_failure(&nbhd, &with_x, op) {
            return Ok(Some(NeighborhoodFailure { vertex: x, args }));
        }
    }
    Ok(None)
}

/// Every non-isolated `x` has `x⁺` absorbing `{x} ∪ x⁺`.
pub fn produces_enough_absorption(r: &Relation, op: &OperationTable) -> Result<bool, AlgebraError> {
    Ok(enough_absorption_failure(r, op)?.is_none())
}

/// `op` preserves `r` and `x⁺` absorbs `A⁺` for every non-isolated `x`.
pub fn semiabsorbing_ii_prime(r: &Relation, op: &OperationTable) -> bool {
    if !compatible(op, r) {
        return false;
    }
    let all = r.all_out_neighbors();
    r.non_isolated().into_iter().all(|x| absorbs(&r.out_neighbors(x), &all, op))
}

/// Forces the near-unanimity equations: on near-unanimous arguments the
/// result is the majority value, elsewhere it is `op`. Operations of arity
/// below 3 first get redundant arguments.
pub fn nu_from_semiabsorbing(op: &OperationTable) -> OperationTable {
    let n = op.size();
    let k = op.arity().max(3);
    let mut inner = alloc::vec![0 as Elem; op.arity()];
    OperationTable::from_fn(n, k, |a| {
        if let Some(v) = near_unanimous_value(a) {
            return v;
        }
        inner.copy_from_slice(&a[..op.arity()]);
        op.get(&inner)
    })
}

/// The value shared by all but at most one argument (arity at least 3).
pub fn near_unanimous_value(a: &[Elem]) -> Option<Elem> {
    let v = if a[0] == a[1] || a[0] == a[2] { a[0] } else { a[1] };
    let off = a.iter().filter(|&&b| b != v).count();
    (off <= 1).then_some(v)
}

/// First argument list of pairs, all from `r` except one arbitrary pair,
/// whose coordinatewise image leaves `r` (`r` fails to absorb `A²`).
pub fn square_absorption_failure(r: &Relation, op: &OperationTable) -> Option<Vec<Vec<Elem>>> {
    let n = op.size();
    let k = op.arity();
    let rt = r.tuples();
    if rt.is_empty() {
        return None;
    }
    let mut failure = None;
    for i in 0..k {
        // Position i gets any pair of A², the rest pairs from R.
        let mut args: Vec<Vec<Elem>> = alloc::vec![alloc::vec![0; 2]; k];
        let done = for_each_tuple(rt.len(), k - 1, |choice| {
            for_each_tuple(n, 2, |free| {
                let mut c = choice.iter();
                for (p, slot) in args.iter_mut().enumerate() {
                    if p == i {
                        slot.copy_from_slice(free);
                    } else {
                        slot.copy_from_slice(&rt[*c.next().expect("choice") as usize]);
                    }
                }
                let image = [0, 1].map(|coord| op.get(&args.iter().map(|t| t[coord]).collect::<Vec<_>>()));
                if r.contains(&image) {
                    true
                } else {
                    failure = Some(args.clone());
                    false
                }
            })
        });
        if !done {
            return failure;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_shape, samples, ShapeKind};

    fn swap() -> Relation {
        Relation::from_edges(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        assert!(compatible(&samples::majority(), &swap()));
        assert!(compatible(&samples::xor3(), &swap()));
        let single = Relation::from_edges(2, &[(0, 1)]).unwrap();
        assert!(compatible(&samples::majority(), &single));
        let le = Relation::from_edges(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let f = compatibility_failure(&samples::xor3(), &le).unwrap();
        assert!(!le.contains(&f.image));
    }

    #[test]
    fn absorption_examples() {
        assert!(absorbs(&[0, 1], &[0], &samples::xor3()));
        assert!(absorbs(&[1], &[0, 1], &samples::majority()));
        let f = absorption_failure(&[1], &[0, 1], &samples::xor3()).unwrap();
        assert_eq!(samples::xor3().get(&f), 0);
    }

    #[test]
    fn enough_absorption_examples() {
        assert!(produces_enough_absorption(&swap(), &samples::majority()).unwrap());
        assert!(!produces_enough_absorption(&swap(), &samples::xor3()).unwrap());
        assert!(produces_enough_absorption(&Relation::empty(3, 2), &samples::xor3()).unwrap());
        let asym = Relation::from_edges(2, &[(0, 1)]).unwrap();
        assert!(produces_enough_absorption(&asym, &samples::majority()).is_err());
    }

    #[test]
    fn semiabsorbing_examples() {
        assert!(semiabsorbing_ii_prime(&swap(), &samples::majority()));
        assert!(!semiabsorbing_ii_prime(&swap(), &samples::xor3()));
        assert!(semiabsorbing_ii_prime(&Relation::empty(2, 2), &samples::xor3()));
    }

    #[test]
    fn nu_modification() {
        assert_eq!(nu_from_semiabsorbing(&samples::majority()), samples::majority());
        let u = nu_from_semiabsorbing(&OperationTable::projection(3, 3, 0));
        assert!(check_shape(&u, ShapeKind::Nu).unwrap());
        let padded = nu_from_semiabsorbing(&samples::meet(3));
        assert_eq!(padded.arity(), 3);
        assert!(check_shape(&padded, ShapeKind::Nu).unwrap());
    }
}

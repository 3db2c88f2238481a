//! The explicit weak 3-cube construction from a strong double loop term,
//! replayed inside the two-generated free algebra realization.
//!
//! Elements of the free algebra are tables over `A^2`; triples are three
//! such tables side by side. Every operation acts coordinatewise, so one
//! flat vector serves for elements and triples alike.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::Cell;

use super::free::strong_double_loop_table;
use super::{system_failure, ForgeError, SynthesisOptions};
use crate::algebra::{
    extract_witness, generate_closure, projection_generators, ClosureStatus, Elem, FiniteAlgebra, OperationTable,
    WitnessedClosure,
};
use crate::term::{builtin_system, name, TermFn};
use crate::HashSet;

fn apply(op: &OperationTable, args: &[&[Elem]]) -> Vec<Elem> {
    let mut buf = alloc::vec![0; args.len()];
    (0..args[0].len())
        .map(|c| {
            for (b, a) in buf.iter_mut().zip(args) {
                *b = a[c];
            }
            op.get(&buf)
        })
        .collect()
}

/// The automorphism swapping the two free generators.
fn swap(t: &[Elem], n: usize) -> Vec<Elem> {
    (0..n * n).map(|p| t[(p % n) * n + p / n]).collect()
}

fn concat(parts: [&[Elem]; 3]) -> Vec<Elem> {
    parts.concat()
}

/// Evaluates products written as juxtaposition, e.g. `x(yx)` or `(xy)x`.
fn product(expr: &str, x: &[Elem], y: &[Elem], mul: &dyn Fn(&[Elem], &[Elem]) -> Vec<Elem>) -> Vec<Elem> {
    fn seq(s: &[u8], pos: &mut usize, x: &[Elem], y: &[Elem], mul: &dyn Fn(&[Elem], &[Elem]) -> Vec<Elem>) -> Vec<Elem> {
        let mut acc: Option<Vec<Elem>> = None;
        while *pos < s.len() && s[*pos] != b')' {
            let f = match s[*pos] {
                b'x' => x.to_vec(),
                b'y' => y.to_vec(),
                b'(' => {
                    *pos += 1;
                    let inner = seq(s, pos, x, y, mul);
                    assert_eq!(s.get(*pos), Some(&b')'), "unbalanced product");
                    inner
                }
                c => panic!("unexpected `{}` in product", c as char),
            };
            *pos += 1;
            acc = Some(match acc {
                None => f,
                Some(a) => mul(&a, &f),
            });
        }
        acc.expect("empty product")
    }
    let mut pos = 0;
    let out = seq(expr.as_bytes(), &mut pos, x, y, mul);
    assert_eq!(pos, expr.len(), "trailing input in product");
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub label: String,
    pub tuple: Vec<Elem>,
    pub present: bool,
}

/// Closes the six weak 3-cube generators under `op`, stopping once every
/// tuple of `required` has appeared.
fn cube_closure(
    op: &OperationTable,
    symbol: &str,
    required: &[Vec<Elem>],
    options: &SynthesisOptions<'_>,
) -> Result<WitnessedClosure, ForgeError> {
    let n = op.size();
    let proj = projection_generators(n, 2)?;
    let (x, y) = (&proj[0][..], &proj[1][..]);
    let gens: Vec<Vec<Elem>> = [[x, y, y], [y, x, y], [y, y, x], [y, x, x], [x, y, x], [x, x, y]]
        .into_iter()
        .map(concat)
        .collect();
    let wanted: HashSet<&[Elem]> = required.iter().map(|t| &t[..]).collect();
    let found = Cell::new(0);
    let target = |t: &[Elem]| {
        if wanted.contains(t) {
            found.set(found.get() + 1);
        }
        found.get() == wanted.len()
    };
    Ok(generate_closure(
        &[(name(symbol), op)],
        3 * n * n,
        &gens,
        &options.closure,
        Some(&target),
    )?)
}

fn memberships(
    c: &WitnessedClosure,
    items: Vec<(String, Vec<Elem>)>,
) -> Result<Vec<Membership>, ForgeError> {
    let out: Vec<Membership> = items
        .into_iter()
        .map(|(label, tuple)| Membership {
            present: c.find(&tuple).is_some(),
            label,
            tuple,
        })
        .collect();
    let settled = matches!(c.status, ClosureStatus::Complete | ClosureStatus::TargetHit(_));
    if settled {
        if let Some(m) = out.iter().find(|m| !m.present) {
            return Err(ForgeError::Membership { label: m.label.clone() });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeReport {
    pub x1: Vec<Elem>,
    pub y1: Vec<Elem>,
    pub x2: Vec<Elem>,
    pub y2: Vec<Elem>,
    pub z: Vec<Elem>,
    /// Whether `y1` is the image of `x1` under the generator swap.
    pub swap_holds: bool,
    /// Six triples, the two `d`-rows and `(z,z,z)`, in that order.
    pub memberships: Vec<Membership>,
    pub status: ClosureStatus,
    pub closure_size: usize,
    /// Weak 3-cube term over `d` read off the derivation of `(z,z,z)`.
    pub term: Option<TermFn>,
    pub verified: bool,
}

impl RecipeReport {
    pub fn all_hold(&self) -> bool {
        self.swap_holds && self.memberships.iter().all(|m| m.present)
    }
}

/// Replays the explicit construction of a constant triple from a strong
/// double loop term `d` over the operations of `alg`.
pub fn explicit_weak3cube_recipe(
    alg: &FiniteAlgebra,
    d: &TermFn,
    options: &SynthesisOptions<'_>,
) -> Result<RecipeReport, ForgeError> {
    let table = strong_double_loop_table(alg, d)?;
    let n = alg.size();
    let proj = projection_generators(n, 2)?;
    let (x, y) = (&proj[0][..], &proj[1][..]);
    let dd = |args: [&[Elem]; 12]| apply(&table, &args);
    let mul = |u: &[Elem], v: &[Elem]| dd([u, u, u, u, u, u, v, v, v, v, v, v]);

    let x1 = product("((xy)x)(y(xy))", x, y, &mul);
    let y1 = product("((yx)y)(x(yx))", x, y, &mul);
    let x2 = product("(xy)(yx)", &x1, &y1, &mul);
    let y2 = product("(yx)(xy)", &x1, &y1, &mul);
    let z = dd([&y2, &y2, &x2, &x2, &x2, &y2, &x2, &x2, &x2, &y2, &x2, &x2]);
    let (x1y1, y1x1) = (mul(&x1, &y1), mul(&y1, &x1));

    let six: Vec<(String, Vec<Elem>)> = [
        ("xyy", [&x2, &y1, &y1]),
        ("yxy", [&y2, &x1, &y1]),
        ("yyx", [&y2, &y1, &x1]),
        ("yxx", [&y2, &x1, &x1]),
        ("xyx", [&x2, &y1, &x1]),
        ("xxy", [&x2, &x1, &y1]),
    ]
    .into_iter()
    .map(|(l, t)| (alloc::format!("triple {l}"), concat(t.map(|v| &v[..]))))
    .collect();

    // Column triples of the two displayed `d`-applications.
    let zrow: [&[Elem]; 12] = [&y2, &y2, &x2, &x2, &x2, &y2, &x2, &x2, &x2, &y2, &x2, &x2];
    let pick = |pattern: &str, a: &[Elem], b: &[Elem]| -> Vec<Vec<Elem>> {
        pattern.bytes().map(|c| if c == b'a' { a.to_vec() } else { b.to_vec() }).collect()
    };
    let rows = [
        (pick("aaaaaabbbbbb", &x1, &y1), pick("aabbbbaaaabb", &x1, &y1), &x1y1),
        (pick("babbaabbaaba", &x1, &y1), pick("abbabababaab", &x1, &y1), &y1x1),
    ];
    let mut items = six.clone();
    for (r, (second, third, value)) in rows.iter().enumerate() {
        let cols: Vec<Vec<Elem>> = (0..12).map(|p| concat([zrow[p], &second[p], &third[p]])).collect();
        for (p, col) in cols.iter().enumerate() {
            if !six.iter().any(|(_, t)| t == col) {
                return Err(ForgeError::Membership {
                    label: alloc::format!("row {} column {} is not one of the six triples", r + 1, p + 1),
                });
            }
        }
        let refs: Vec<&[Elem]> = cols.iter().map(|c| &c[..]).collect();
        let got = apply(&table, &refs);
        let want = concat([&z[..], &value[..], &value[..]]);
        if got != want {
            return Err(ForgeError::Membership {
                label: alloc::format!("row {} does not evaluate to the displayed triple", r + 1),
            });
        }
        items.push((alloc::format!("row {}", r + 1), want));
    }
    let zzz = concat([&z, &z, &z]);
    items.push(("(z,z,z)".to_string(), zzz.clone()));

    let required: Vec<Vec<Elem>> = items.iter().map(|(_, t)| t.clone()).collect();
    let c = cube_closure(&table, "d", &required, options)?;
    let memberships = memberships(&c, items)?;
    let mut report = RecipeReport {
        swap_holds: swap(&x1, n) == y1,
        x1,
        y1,
        x2,
        y2,
        z,
        memberships,
        status: c.status,
        closure_size: c.len(),
        term: None,
        verified: false,
    };
    if let Some(i) = c.find(&zzz) {
        let term = extract_witness(&c, i)?.with_params("x");
        let sys = builtin_system("weak_3cube", None).expect("builtin exists");
        let binding = [(name("d"), d.clone()), (name("t"), term.clone())];
        if let Some(failure) = system_failure(alg, &sys, &binding)? {
            return Err(ForgeError::Verification {
                system: "weak 3-cube".to_string(),
                failure: Some(failure),
            });
        }
        report.term = Some(term);
        report.verified = true;
    }
    Ok(report)
}

/// The twelve column triples of the expansion of `((y1x1)(x1y1), x1, x1)`.
const EXPANSION: [[&str; 3]; 12] = [
    ["yx", "xy", "x"],
    ["y", "xy", "x"],
    ["x(yx)", "x", "y"],
    ["(xy)x", "y", "x"],
    ["y", "x", "x"],
    ["xy", "y", "x"],
    ["xy", "x", "y"],
    ["x", "y", "y"],
    ["y(xy)", "x", "y"],
    ["(yx)y", "y", "x"],
    ["x", "xy", "y"],
    ["yx", "xy", "y"],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotencyClaim {
    pub x1: Vec<Elem>,
    pub y1: Vec<Elem>,
    pub swap_holds: bool,
    /// The twelve expansion columns, then the claimed triple.
    pub memberships: Vec<Membership>,
    /// Whether the bracketed expansion evaluates to the claimed triple.
    pub expansion_matches: bool,
    pub status: ClosureStatus,
}

impl IdempotencyClaim {
    pub fn holds(&self) -> bool {
        self.swap_holds && self.expansion_matches && self.memberships.iter().all(|m| m.present)
    }
}

/// Checks, for an idempotent binary operation, that `x1 = ((xy)x)(y(xy))`
/// and its swap `y1` put `((y1x1)(x1y1), x1, x1)` into the subpower
/// generated by the six weak 3-cube triples, via the twelve-column
/// expansion.
pub fn verify_idempotency_claim(
    op: &OperationTable,
    options: &SynthesisOptions<'_>,
) -> Result<IdempotencyClaim, ForgeError> {
    if op.arity() != 2 {
        return Err(ForgeError::Arity {
            expected: 2,
            found: op.arity(),
        });
    }
    if let Some(elem) = op.idempotency_failure() {
        return Err(ForgeError::NotIdempotent {
            op: "·".to_string(),
            elem,
        });
    }
    let n = op.size();
    let proj = projection_generators(n, 2)?;
    let (x, y) = (&proj[0][..], &proj[1][..]);
    let mul = |u: &[Elem], v: &[Elem]| apply(op, &[u, v]);
    let x1 = product("((xy)x)(y(xy))", x, y, &mul);
    let y1 = product("((yx)y)(x(yx))", x, y, &mul);
    let triple = concat([&product("(yx)(xy)", &x1, &y1, &mul), &x1, &x1]);

    let cols: Vec<Vec<Elem>> = EXPANSION
        .iter()
        .map(|c| concat(c.map(|e| product(e, x, y, &mul)).each_ref().map(|v| &v[..])))
        .collect();
    let m = |a: &Vec<Elem>, b: &Vec<Elem>| mul(a, b);
    let half = |c: &[Vec<Elem>]| m(&m(&m(&c[0], &c[1]), &c[2]), &m(&c[3], &m(&c[4], &c[5])));
    let expanded = m(&half(&cols[..6]), &half(&cols[6..]));

    let mut items: Vec<(String, Vec<Elem>)> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| (alloc::format!("column {}", i + 1), c.clone()))
        .collect();
    items.push(("((y1x1)(x1y1), x1, x1)".to_string(), triple.clone()));
    let required: Vec<Vec<Elem>> = items.iter().map(|(_, t)| t.clone()).collect();
    let c = cube_closure(op, "m", &required, options)?;
    Ok(IdempotencyClaim {
        swap_holds: swap(&x1, n) == y1,
        x1,
        y1,
        memberships: memberships(&c, items)?,
        expansion_matches: expanded == triple,
        status: c.status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::samples;
    use crate::forge::{double_loop_from_taylor, strong_double_loop_from_double_loop, weak_3cube_from_strong_double_loop};

    fn strong_d(alg: &FiniteAlgebra) -> TermFn {
        let dl = double_loop_from_taylor(alg, &[], &SynthesisOptions::default()).unwrap();
        strong_double_loop_from_double_loop("d").term.inline("d", dl.term.as_ref().unwrap())
    }

    #[test]
    fn projections_swap() {
        let proj = projection_generators(3, 2).unwrap();
        assert_eq!(swap(&proj[0], 3), proj[1]);
    }

    #[test]
    fn first_projection_claim() {
        let c = verify_idempotency_claim(&OperationTable::projection(2, 2, 0), &SynthesisOptions::default()).unwrap();
        assert!(c.holds());
        let proj = projection_generators(2, 2).unwrap();
        assert_eq!(c.x1, proj[0]);
        let yxx = concat([&proj[1], &proj[0], &proj[0]]);
        assert_eq!(c.memberships.last().unwrap().tuple, yxx);
    }

    #[test]
    fn second_projection_claim() {
        let c = verify_idempotency_claim(&OperationTable::projection(2, 2, 1), &SynthesisOptions::default()).unwrap();
        assert!(c.holds());
        let proj = projection_generators(2, 2).unwrap();
        let xyy = concat([&proj[0], &proj[1], &proj[1]]);
        assert_eq!(c.memberships.last().unwrap().tuple, xyy);
    }

    #[test]
    fn meet_claim_is_constant() {
        let c = verify_idempotency_claim(&samples::meet(2), &SynthesisOptions::default()).unwrap();
        assert!(c.holds());
        assert_eq!(c.x1, c.y1);
        let t = &c.memberships.last().unwrap().tuple;
        assert!(t[..4] == t[4..8] && t[4..8] == t[8..]);
    }

    #[test]
    fn rejects_non_idempotent() {
        let t = OperationTable::new(2, 2, alloc::vec![1, 0, 0, 0]).unwrap();
        assert!(matches!(
            verify_idempotency_claim(&t, &SynthesisOptions::default()),
            Err(ForgeError::NotIdempotent { .. })
        ));
    }

    #[test]
    fn recipe_on_boolean_algebras() {
        for (s, t) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
            let alg = samples::algebra(2, s, t);
            let d = strong_d(&alg);
            let r = explicit_weak3cube_recipe(&alg, &d, &SynthesisOptions::default()).unwrap();
            assert!(r.all_hold(), "{s}");
            assert!(r.verified);
            let search = weak_3cube_from_strong_double_loop(&alg, &d, &SynthesisOptions::default()).unwrap();
            assert!(search.verified);
        }
    }
}

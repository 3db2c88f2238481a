//! The constructive loop lemma.
//!
//! The recursion works on a symmetric relation `R`, a fixed operation `f`,
//! a second operation `g` and an odd closed `R`-walk of length `l`. It
//! decreases `(arity(g), l)` lexicographically:
//!
//! * `l = 1`: the walk is a loop;
//! * `arity(g) = 1`: `g(x)` carries a loop for any non-isolated `x`;
//! * otherwise a loop of `R³` (found recursively with `l - 2`) is a triangle
//!   `a, b, c` of `R`; the recursion continues inside the neighborhood of
//!   `a` with `a` plugged into the last argument of `g`, along an odd walk
//!   built from `f`, `b` and `c`.

use alloc::vec::Vec;
use core::fmt;

use super::digraph::{compose_power, find_odd_cycle, is_closed_walk};
use super::LoopError;
use crate::algebra::{
    check_shape, compatibility_failure, enough_absorption_failure, for_each_tuple, shape_failure,
    square_absorption_failure, CompatibilityFailure, Elem, Failure, NeighborhoodFailure, OperationTable, Relation,
    ShapeKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    F,
    G,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::F => "f",
            Role::G => "g",
        })
    }
}

/// A failed hypothesis together with its first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotSymmetric { a: Elem, b: Elem },
    NoOddCycle,
    BadCycle { cycle: Vec<Elem> },
    NotCompatible(CompatibilityFailure),
    NotEnoughAbsorption { op: Role, failure: NeighborhoodFailure },
    ArityOrder { g: usize, f: usize },
    LinkBroken { x: Vec<Elem>, y: Vec<Elem> },
    NotClosed { op: Role, args: Vec<Elem> },
    NoTriangle { vertex: Elem },
    NoLoop { vertex: Elem },
    NotNu(Option<Failure>),
    NotIdempotent { value: Elem },
    NotAbsorbingSquare { args: Vec<Vec<Elem>> },
    NotSemiabsorbing,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSymmetric { a, b } => write!(f, "relation is not symmetric: ({a},{b}) has no reverse"),
            Violation::NoOddCycle => write!(f, "relation has no odd cycle"),
            Violation::BadCycle { cycle } => write!(f, "{cycle:?} is not an odd closed walk"),
            Violation::NotCompatible(c) => {
                write!(f, "operation is not compatible: {:?} maps to {:?}", c.args, c.image)
            }
            Violation::NotEnoughAbsorption { op, failure } => write!(
                f,
                "neighborhood of {} does not absorb it wrt {op}: {op}{:?} leaves it",
                failure.vertex, failure.args
            ),
            Violation::ArityOrder { g, f: a } => write!(f, "arity of g ({g}) exceeds arity of f ({a})"),
            Violation::LinkBroken { x, y } => write!(f, "g{x:?} and f{y:?} are not related"),
            Violation::NotClosed { op, args } => write!(f, "neighborhood is not closed under {op} at {args:?}"),
            Violation::NoTriangle { vertex } => write!(f, "no triangle through {vertex}"),
            Violation::NoLoop { vertex } => write!(f, "expected a loop at {vertex}"),
            Violation::NotNu(Some(e)) => write!(f, "operation is not near unanimity: {e}"),
            Violation::NotNu(None) => write!(f, "operation is not near unanimity: arity below 3"),
            Violation::NotIdempotent { value } => write!(f, "operation is not idempotent at {value}"),
            Violation::NotAbsorbingSquare { args } => {
                write!(f, "relation does not absorb the square: pairs {args:?}")
            }
            Violation::NotSemiabsorbing => write!(f, "neighborhoods do not absorb the non-isolated elements"),
        }
    }
}

/// Hypotheses of the loop lemma, each with its first counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreconditionReport {
    pub symmetric: Option<Violation>,
    /// Item (1); the shortest odd cycle when present.
    pub odd_cycle: Result<Vec<Elem>, Violation>,
    /// Item (2): `f` is compatible with `R`.
    pub compatible: Option<Violation>,
    /// Item (3): `R` produces enough absorption wrt `f`.
    pub absorption_f: Option<Violation>,
    /// Item (4): arity of `g` at most that of `f`, and `g` linked to `f`.
    pub link: Option<Violation>,
    /// Item (5): `R` produces enough absorption wrt `g`.
    pub absorption_g: Option<Violation>,
}

impl PreconditionReport {
    /// Whether lemma item `i` (1 to 5) holds.
    pub fn item(&self, i: usize) -> bool {
        match i {
            1 => self.odd_cycle.is_ok(),
            2 => self.compatible.is_none(),
            3 => self.absorption_f.is_none(),
            4 => self.link.is_none(),
            5 => self.absorption_g.is_none(),
            _ => panic!("lemma items are numbered 1 to 5"),
        }
    }

    pub fn all_hold(&self) -> bool {
        self.symmetric.is_none() && (1..=5).all(|i| self.item(i))
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.symmetric
            .as_ref()
            .or(self.odd_cycle.as_ref().err())
            .or(self.compatible.as_ref())
            .or(self.absorption_f.as_ref())
            .or(self.link.as_ref())
            .or(self.absorption_g.as_ref())
    }
}

fn absorption_violation(r: &Relation, op: &OperationTable, role: Role) -> Option<Violation> {
    match enough_absorption_failure(r, op) {
        Ok(None) => None,
        Ok(Some(failure)) => Some(Violation::NotEnoughAbsorption { op: role, failure }),
        Err(_) => r.symmetry_failure().map(|(a, b)| Violation::NotSymmetric { a, b }),
    }
}

/// First `x̄, ȳ` with all `(xᵢ,yᵢ) ∈ R` and `(g(x₁..x_{ar g}), f(ȳ)) ∉ R`.
fn link_violation(r: &Relation, f: &OperationTable, g: &OperationTable) -> Option<Violation> {
    if g.arity() > f.arity() {
        return Some(Violation::ArityOrder {
            g: g.arity(),
            f: f.arity(),
        });
    }
    let pairs = r.edges();
    if pairs.is_empty() {
        return None;
    }
    let (m, k) = (f.arity(), g.arity());
    let mut x = alloc::vec![0 as Elem; m];
    let mut y = alloc::vec![0 as Elem; m];
    let mut bad = None;
    for_each_tuple(pairs.len(), m, |choice| {
        for (i, &c) in choice.iter().enumerate() {
            (x[i], y[i]) = pairs[c as usize];
        }
        if r.has_edge(g.get(&x[..k]), f.get(&y)) {
            true
        } else {
            bad = Some(Violation::LinkBroken {
                x: x[..k].to_vec(),
                y: y.clone(),
            });
            false
        }
    });
    bad
}

fn cycle_violation(r: &Relation, cycle: &[Elem]) -> Option<Violation> {
    (cycle.len().is_multiple_of(2) || !is_closed_walk(r, cycle)).then(|| Violation::BadCycle { cycle: cycle.to_vec() })
}

/// Checks the hypotheses of the loop lemma for `R`, `f` and `g`.
pub fn validate_preconditions(r: &Relation, f: &OperationTable, g: &OperationTable) -> PreconditionReport {
    let symmetric = r.symmetry_failure().map(|(a, b)| Violation::NotSymmetric { a, b });
    let odd_cycle = match find_odd_cycle(r) {
        Ok(Some(c)) => Ok(c),
        Ok(None) => Err(Violation::NoOddCycle),
        Err(_) => Err(symmetric.clone().expect("asymmetric")),
    };
    PreconditionReport {
        compatible: compatibility_failure(f, r).map(Violation::NotCompatible),
        absorption_f: absorption_violation(r, f, Role::F),
        link: link_violation(r, f, g),
        absorption_g: absorption_violation(r, g, Role::G),
        symmetric,
        odd_cycle,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    LReduction,
    Restriction,
    Base,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::LReduction => "l-reduction",
            Phase::Restriction => "restriction",
            Phase::Base => "base",
        }
    }
}

/// One step of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub phase: Phase,
    /// `(arity(g), l)` of the call that took the step.
    pub measure: (usize, usize),
    /// Measure of the recursive call the step leads to.
    pub next: Option<(usize, usize)>,
    /// Index into [`LoopCertificate::relations`] of the call's relation.
    pub relation: usize,
    /// The odd walk handed to the recursive call (the call's own walk for
    /// base frames).
    pub cycle: Vec<Elem>,
    pub triangle: Option<[Elem; 3]>,
    pub vertex: Option<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopCertificate {
    pub vertex: Elem,
    pub frames: Vec<Frame>,
    pub relations: Vec<Relation>,
}

impl LoopCertificate {
    pub fn pair(&self) -> (Elem, Elem) {
        (self.vertex, self.vertex)
    }

    /// Every step strictly decreases the measure lexicographically.
    pub fn measure_decreases(&self) -> bool {
        self.frames.iter().all(|fr| fr.next.is_none_or(|n| n < fr.measure))
    }

    /// Rechecks the certificate against `r`: the loop is in `r`, the
    /// measure decreases, triangles and base loops lie in their relations
    /// and handed-down walks are odd closed walks.
    pub fn verify(&self, r: &Relation) -> bool {
        let frames_ok = self.frames.iter().all(|fr| {
            let rel = &self.relations[fr.relation];
            let walk_ok = fr.cycle.len() % 2 == 1;
            let tri_ok = fr.triangle.is_none_or(|[a, b, c]| rel.has_edge(a, b) && rel.has_edge(b, c) && rel.has_edge(c, a));
            let base_ok = fr.phase != Phase::Base || fr.vertex.is_some_and(|v| rel.has_edge(v, v));
            walk_ok && tri_ok && base_ok
        });
        r.has_edge(self.vertex, self.vertex) && self.measure_decreases() && frames_ok
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopOptions {
    /// Re-check the lemma's hypotheses at every frame.
    pub validate: bool,
}

impl Default for LoopOptions {
    fn default() -> LoopOptions {
        LoopOptions { validate: true }
    }
}

struct Run<'a> {
    f: &'a OperationTable,
    options: LoopOptions,
    frames: Vec<Frame>,
    relations: Vec<Relation>,
}

/// `g` with `a` plugged into its last argument.
fn plug_last(g: &OperationTable, a: Elem) -> OperationTable {
    let mut full = alloc::vec![0 as Elem; g.arity()];
    OperationTable::from_fn(g.size(), g.arity() - 1, |x| {
        full[..x.len()].copy_from_slice(x);
        full[x.len()] = a;
        g.get(&full)
    })
}

/// The odd walk `f(b..b), f(a,c..c), f(c,b..b), f(b,a,c..c), …,
/// f(c..c,b), f(b..b,a), f(c..c)` inside the neighborhood of `a`.
fn restriction_walk(f: &OperationTable, [a, b, c]: [Elem; 3]) -> Vec<Elem> {
    let n = f.arity();
    let mut walk = Vec::with_capacity(2 * n + 1);
    let mut args = alloc::vec![0 as Elem; n];
    for i in 0..=n {
        for (j, slot) in args.iter_mut().enumerate() {
            *slot = if j < i { c } else { b };
        }
        walk.push(f.get(&args));
        if i < n {
            for (j, slot) in args.iter_mut().enumerate() {
                *slot = match j.cmp(&i) {
                    core::cmp::Ordering::Less => b,
                    core::cmp::Ordering::Equal => a,
                    core::cmp::Ordering::Greater => c,
                };
            }
            walk.push(f.get(&args));
        }
    }
    walk
}

impl Run<'_> {
    fn fail(&self, violation: Violation) -> LoopError {
        LoopError::Precondition {
            frame: self.frames.len(),
            violation,
        }
    }

    fn check(&self, r: &Relation, g: &OperationTable, cycle: &[Elem]) -> Result<(), LoopError> {
        let found = r
            .symmetry_failure()
            .map(|(a, b)| Violation::NotSymmetric { a, b })
            .or_else(|| cycle_violation(r, cycle))
            .or_else(|| compatibility_failure(self.f, r).map(Violation::NotCompatible))
            .or_else(|| absorption_violation(r, self.f, Role::F))
            .or_else(|| link_violation(r, self.f, g))
            .or_else(|| absorption_violation(r, g, Role::G));
        match found {
            Some(v) => Err(self.fail(v)),
            None => Ok(()),
        }
    }

    fn solve(&mut self, r: Relation, g: OperationTable, cycle: Vec<Elem>) -> Result<Elem, LoopError> {
        if self.options.validate {
            self.check(&r, &g, &cycle)?;
        }
        let measure = (g.arity(), cycle.len());
        let relation = self.relations.len();
        self.relations.push(r);
        let r = &self.relations[relation];

        let base = if cycle.len() == 1 {
            Some(cycle[0])
        } else if g.arity() == 1 {
            let x = *r.non_isolated().first().ok_or_else(|| self.fail(Violation::NoOddCycle))?;
            Some(g.get(&[x]))
        } else {
            None
        };
        if let Some(v) = base {
            if !r.has_edge(v, v) {
                return Err(self.fail(Violation::NoLoop { vertex: v }));
            }
            self.frames.push(Frame {
                phase: Phase::Base,
                measure,
                next: None,
                relation,
                cycle,
                triangle: None,
                vertex: Some(v),
            });
            return Ok(v);
        }

        let r3 = compose_power(r, 3);
        let shorter = cycle[..cycle.len() - 2].to_vec();
        self.frames.push(Frame {
            phase: Phase::LReduction,
            measure,
            next: Some((g.arity(), shorter.len())),
            relation,
            cycle: shorter.clone(),
            triangle: None,
            vertex: None,
        });
        let a = self.solve(r3, g.clone(), shorter)?;

        let r = &self.relations[relation];
        let triangle = r
            .out_neighbors(a)
            .into_iter()
            .find_map(|b| r.out_neighbors(b).into_iter().find(|&c| r.has_edge(c, a)).map(|c| [a, b, c]))
            .ok_or_else(|| self.fail(Violation::NoTriangle { vertex: a }))?;
        let mut inside = alloc::vec![false; r.size()];
        let hood = r.out_neighbors(a);
        for &x in &hood {
            inside[x as usize] = true;
        }
        let restricted = r.restrict(&inside);
        let g2 = plug_last(&g, a);
        if self.options.validate {
            self.check_closed(&hood, &inside, &g2)?;
        }
        let walk = restriction_walk(self.f, triangle);
        let next = (g2.arity(), walk.len());
        if next >= measure || walk.len().is_multiple_of(2) {
            return Err(self.fail(Violation::BadCycle { cycle: walk }));
        }
        self.frames.push(Frame {
            phase: Phase::Restriction,
            measure,
            next: Some(next),
            relation,
            cycle: walk.clone(),
            triangle: Some(triangle),
            vertex: Some(a),
        });
        self.solve(restricted, g2, walk)
    }

    /// The neighborhood is closed under `f` and the plugged `g`.
    fn check_closed(&self, hood: &[Elem], inside: &[bool], g: &OperationTable) -> Result<(), LoopError> {
        for (op, role) in [(self.f, Role::F), (g, Role::G)] {
            let mut args = alloc::vec![0 as Elem; op.arity()];
            let mut bad = None;
            for_each_tuple(hood.len(), op.arity(), |pick| {
                for (slot, &p) in args.iter_mut().zip(pick) {
                    *slot = hood[p as usize];
                }
                if inside[op.get(&args) as usize] {
                    true
                } else {
                    bad = Some(args.clone());
                    false
                }
            });
            if let Some(args) = bad {
                return Err(self.fail(Violation::NotClosed { op: role, args }));
            }
        }
        Ok(())
    }
}

/// Runs the recursion of the loop lemma from the odd closed walk `cycle`.
pub fn find_loop_constructive(
    r: &Relation,
    f: &OperationTable,
    g: &OperationTable,
    cycle: &[Elem],
    options: LoopOptions,
) -> Result<LoopCertificate, LoopError> {
    for op in [f, g] {
        if op.size() != r.size() {
            return Err(LoopError::SizeMismatch {
                expected: r.size(),
                found: op.size(),
            });
        }
    }
    let mut run = Run {
        f,
        options,
        frames: Vec::new(),
        relations: Vec::new(),
    };
    if !options.validate {
        // The walk is always checked; everything else is trusted.
        if let Some(v) = cycle_violation(r, cycle) {
            return Err(run.fail(v));
        }
        if g.arity() > f.arity() {
            return Err(run.fail(Violation::ArityOrder {
                g: g.arity(),
                f: f.arity(),
            }));
        }
    }
    let vertex = run.solve(r.clone(), g.clone(), cycle.to_vec())?;
    if !r.has_edge(vertex, vertex) {
        return Err(run.fail(Violation::NoLoop { vertex }));
    }
    Ok(LoopCertificate {
        vertex,
        frames: run.frames,
        relations: run.relations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopMode {
    /// The operation is a near unanimity operation compatible with `R`.
    Nu,
    /// `R` absorbs `A²` wrt the idempotent operation.
    Absorbing,
    /// The lemma's hypotheses directly, with `g = f`.
    Lemma,
}

impl LoopMode {
    pub fn label(self) -> &'static str {
        match self {
            LoopMode::Nu => "nu",
            LoopMode::Absorbing => "absorbing",
            LoopMode::Lemma => "lemma",
        }
    }

    pub fn parse(s: &str) -> Option<LoopMode> {
        [LoopMode::Nu, LoopMode::Absorbing, LoopMode::Lemma]
            .into_iter()
            .find(|m| m.label() == s)
    }
}

/// Checks the mode's hypothesis, derives the lemma's hypotheses from it and
/// runs the recursion with `g = f`.
pub fn find_loop(r: &Relation, op: &OperationTable, mode: LoopMode, options: LoopOptions) -> Result<LoopCertificate, LoopError> {
    if op.size() != r.size() {
        return Err(LoopError::SizeMismatch {
            expected: r.size(),
            found: op.size(),
        });
    }
    let refuse = |violation| LoopError::Mode { mode, violation };
    if let Some((a, b)) = r.symmetry_failure() {
        return Err(refuse(Violation::NotSymmetric { a, b }));
    }
    match mode {
        LoopMode::Nu => {
            if !check_shape(op, ShapeKind::Nu).unwrap_or(false) {
                return Err(refuse(Violation::NotNu(shape_failure(op, ShapeKind::Nu).ok().flatten())));
            }
            if let Some(c) = compatibility_failure(op, r) {
                return Err(refuse(Violation::NotCompatible(c)));
            }
        }
        LoopMode::Absorbing => {
            if let Some(value) = op.idempotency_failure() {
                return Err(refuse(Violation::NotIdempotent { value }));
            }
            if let Some(args) = square_absorption_failure(r, op) {
                return Err(refuse(Violation::NotAbsorbingSquare { args }));
            }
        }
        LoopMode::Lemma => {}
    }
    if mode != LoopMode::Lemma && !crate::algebra::semiabsorbing_ii_prime(r, op) {
        return Err(refuse(Violation::NotSemiabsorbing));
    }
    let report = validate_preconditions(r, op, op);
    if let Some(v) = report.first_violation() {
        return Err(refuse(v.clone()));
    }
    let cycle = report.odd_cycle.expect("checked above");
    find_loop_constructive(r, op, op, &cycle, options)
}

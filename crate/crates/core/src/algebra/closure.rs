//! Subpower generation with per-element derivations.
//!
//! Applying a `k`-ary operation coordinatewise to all `k`-tuples of current
//! elements is done argument by argument. After fixing the first `j`
//! arguments, each coordinate only needs to remember which residual
//! function (the sub-table obtained by fixing those arguments) it is in, so
//! partial applications collapse into few distinct states. Backpointers on
//! the states recover the arguments of every produced tuple.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::hash::{BuildHasher, Hasher};

use hashbrown::HashTable;

use super::table::table_len;
use super::{AlgebraError, Elem, FiniteAlgebra, OperationTable};
use crate::term::{name, Name, Term, TermBank, TermFn};
use crate::HashMap;

/// Residual-function automaton of an operation table.
#[derive(Clone, Debug)]
pub struct Residual {
    size: usize,
    arity: usize,
    /// `trans[j][c * size + a]`: class at level `j + 1` reached from class
    /// `c` at level `j` by fixing the next argument to `a`. Classes at level
    /// `arity` are values.
    trans: Vec<Vec<u32>>,
}

#[derive(Default, Clone, Copy)]
struct Fnv;

struct FnvHasher(u64);

impl Hasher for FnvHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= u64::from(*b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn write_u32(&mut self, v: u32) {
        self.0 = (self.0 ^ u64::from(v)).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(23);
    }
}

impl BuildHasher for Fnv {
    type Hasher = FnvHasher;

    fn build_hasher(&self) -> FnvHasher {
        FnvHasher(0xcbf2_9ce4_8422_2325)
    }
}

fn hash_slice(s: &[u32]) -> u64 {
    let mut h = Fnv.build_hasher();
    for &v in s {
        h.write_u32(v);
    }
    h.finish()
}

/// Deduplicating store of fixed-width `u32` rows.
struct RowSet {
    width: usize,
    rows: Vec<u32>,
    table: HashTable<u32>,
}

impl RowSet {
    fn new(width: usize) -> RowSet {
        RowSet {
            width,
            rows: Vec::new(),
            table: HashTable::new(),
        }
    }

    fn len(&self) -> usize {
        if self.width == 0 {
            usize::from(!self.table.is_empty())
        } else {
            self.rows.len() / self.width
        }
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.rows[i * self.width..(i + 1) * self.width]
    }

    /// Index of `row`, inserting it if new. The flag is true for new rows.
    fn intern(&mut self, row: &[u32]) -> (u32, bool) {
        let h = hash_slice(row);
        let w = self.width;
        let rows = &self.rows;
        if let Some(&i) = self.table.find(h, |&i| &rows[i as usize * w..(i as usize + 1) * w] == row) {
            return (i, false);
        }
        let i = self.len() as u32;
        self.rows.extend_from_slice(row);
        let rows = &self.rows;
        self.table
            .insert_unique(h, i, |&j| hash_slice(&rows[j as usize * w..(j as usize + 1) * w]));
        (i, true)
    }
}

impl Residual {
    pub fn new(t: &OperationTable) -> Residual {
        let n = t.size();
        let k = t.arity();
        let mut trans: Vec<Vec<u32>> = alloc::vec![Vec::new(); k];
        // Class of every prefix at level j + 1, starting with the values.
        let mut next: Vec<u32> = t.table().to_vec();
        for j in (0..k).rev() {
            let prefixes = next.len() / n;
            let mut classes = RowSet::new(n);
            let mut cur = Vec::with_capacity(prefixes);
            for p in 0..prefixes {
                let (c, _) = classes.intern(&next[p * n..(p + 1) * n]);
                cur.push(c);
            }
            trans[j] = classes.rows;
            next = cur;
        }
        Residual { size: n, arity: k, trans }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of residual classes after fixing `j` arguments.
    pub fn classes_at(&self, j: usize) -> usize {
        if j == self.arity {
            self.size
        } else {
            self.trans[j].len() / self.size
        }
    }
}

/// The work limit was reached while enumerating an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkLimit;

/// All coordinatewise images `f(e_1, ..., e_k)` for `e_i` among the
/// `width`-tuples in `elems` (flat). Calls `visit(result, args)` once per
/// distinct result with the first argument tuple found; `visit` returns
/// false to stop early.
pub fn for_each_image(
    res: &Residual,
    width: usize,
    elems: &[Elem],
    budget: &mut usize,
    mut visit: impl FnMut(&[Elem], &[u32]) -> bool,
) -> Result<(), WorkLimit> {
    let count = if width == 0 { 0 } else { elems.len() / width };
    let n = res.size;
    let mut level = RowSet::new(width);
    level.intern(&alloc::vec![0; width]);
    let mut back: Vec<Vec<(u32, u32)>> = Vec::with_capacity(res.arity);
    let mut buf = alloc::vec![0u32; width];
    for j in 0..res.arity {
        let trans = &res.trans[j];
        let mut next = RowSet::new(width);
        let mut bp: Vec<(u32, u32)> = Vec::new();
        for s in 0..level.len() {
            let state = level.row(s);
            for e in 0..count {
                let elem = &elems[e * width..(e + 1) * width];
                for c in 0..width {
                    buf[c] = trans[state[c] as usize * n + elem[c] as usize];
                }
                let (_, fresh) = next.intern(&buf);
                if fresh {
                    bp.push((s as u32, e as u32));
                    if *budget == 0 {
                        return Err(WorkLimit);
                    }
                    *budget -= 1;
                }
            }
        }
        back.push(bp);
        level = next;
    }
    let mut args = alloc::vec![0u32; res.arity];
    for s in 0..level.len() {
        let mut cur = s as u32;
        for j in (0..res.arity).rev() {
            let (parent, e) = back[j][cur as usize];
            args[j] = e;
            cur = parent;
        }
        if !visit(level.row(s), &args) {
            break;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// The `i`-th supplied generator (0-based).
    Generator(usize),
    /// Operation `op` (index into the closure's operation list) applied to
    /// the listed elements.
    Apply { op: usize, args: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureStatus {
    /// Fixpoint reached: the elements form the generated subuniverse.
    Complete,
    /// The element with this index satisfies the target predicate.
    TargetHit(usize),
    /// The element cap was reached; the closure is partial.
    CapExceeded,
    /// The state budget was exhausted inside a round; the closure is partial.
    WorkLimit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    pub cap: usize,
    /// Limit on intermediate states across all rounds.
    pub state_budget: usize,
}

impl Default for ClosureOptions {
    fn default() -> ClosureOptions {
        ClosureOptions {
            cap: 1_000_000,
            state_budget: 50_000_000,
        }
    }
}

/// A generated subuniverse of `A^width`, each element carrying a derivation.
#[derive(Clone, Debug)]
pub struct WitnessedClosure {
    width: usize,
    op_names: Vec<Name>,
    generator_count: usize,
    data: Vec<Elem>,
    index: HashMap<Box<[Elem]>, usize>,
    derivations: Vec<Derivation>,
    depths: Vec<u32>,
    /// Number of elements after each round (round 0 = generators).
    pub round_sizes: Vec<usize>,
    pub status: ClosureStatus,
    pub states_explored: usize,
}

impl WitnessedClosure {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.derivations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.derivations.is_empty()
    }

    pub fn element(&self, i: usize) -> &[Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn elements(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.len()).map(move |i| self.element(i))
    }

    pub fn find(&self, t: &[Elem]) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn derivation(&self, i: usize) -> &Derivation {
        &self.derivations[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depths[i] as usize
    }

    pub fn op_names(&self) -> &[Name] {
        &self.op_names
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn rounds(&self) -> usize {
        self.round_sizes.len().saturating_sub(1)
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClosureStatus::Complete
    }

    pub fn target(&self) -> Option<usize> {
        match self.status {
            ClosureStatus::TargetHit(i) => Some(i),
            _ => None,
        }
    }

    /// First element (by index) satisfying `pred`.
    pub fn position(&self, pred: impl Fn(&[Elem]) -> bool) -> Option<usize> {
        (0..self.len()).find(|&i| pred(self.element(i)))
    }

    fn push(&mut self, t: &[Elem], d: Derivation, depth: u32) -> usize {
        let i = self.len();
        self.data.extend_from_slice(t);
        self.index.insert(t.into(), i);
        self.derivations.push(d);
        self.depths.push(depth);
        i
    }
}

/// Closes `generators` (tuples of length `width`) under the operations,
/// round by round. New elements of a round are inserted in lexicographic
/// order and the target predicate is checked on every insertion, the
/// generators included.
pub fn generate_closure(
    ops: &[(Name, &OperationTable)],
    width: usize,
    generators: &[Vec<Elem>],
    options: &ClosureOptions,
    target: Option<&dyn Fn(&[Elem]) -> bool>,
) -> Result<WitnessedClosure, AlgebraError> {
    if options.cap < generators.len() {
        return Err(AlgebraError::CapBelowGenerators {
            cap: options.cap,
            generators: generators.len(),
        });
    }
    let size = ops.first().map(|(_, t)| t.size());
    for (s, t) in ops {
        if Some(t.size()) != size {
            return Err(AlgebraError::SizeMismatch {
                expected: size.unwrap_or(0),
                found: t.size(),
            });
        }
        if t.arity() == 0 {
            return Err(AlgebraError::ZeroArity);
        }
        let _ = s;
    }
    for (i, g) in generators.iter().enumerate() {
        if g.len() != width {
            return Err(AlgebraError::TupleLength {
                tuple: i,
                expected: width,
                found: g.len(),
            });
        }
        if let (Some(n), Some(&v)) = (size, g.iter().find(|&&v| Some(v as usize) >= size)) {
            return Err(AlgebraError::EntryOutOfRange { index: i, value: v, size: n });
        }
    }

    let mut c = WitnessedClosure {
        width,
        op_names: ops.iter().map(|(s, _)| s.clone()).collect(),
        generator_count: generators.len(),
        data: Vec::new(),
        index: HashMap::new(),
        derivations: Vec::new(),
        depths: Vec::new(),
        round_sizes: Vec::new(),
        status: ClosureStatus::Complete,
        states_explored: 0,
    };
    let hit = |t: &[Elem]| target.is_some_and(|f| f(t));
    for (i, g) in generators.iter().enumerate() {
        if c.find(g).is_some() {
            continue;
        }
        let idx = c.push(g, Derivation::Generator(i), 0);
        if hit(g) {
            c.status = ClosureStatus::TargetHit(idx);
            c.round_sizes.push(c.len());
            return Ok(c);
        }
    }
    c.round_sizes.push(c.len());

    let residuals: Vec<Residual> = ops.iter().map(|(_, t)| Residual::new(t)).collect();
    let mut budget = options.state_budget;
    let mut round: u32 = 0;
    loop {
        round += 1;
        let mut found: Vec<(Box<[Elem]>, Derivation)> = Vec::new();
        let mut fresh: HashMap<Box<[Elem]>, ()> = HashMap::new();
        for (o, res) in residuals.iter().enumerate() {
            let before = budget;
            let outcome = for_each_image(res, width, &c.data, &mut budget, |t, args| {
                if c.find(t).is_none() && !fresh.contains_key(t) {
                    fresh.insert(t.into(), ());
                    found.push((
                        t.into(),
                        Derivation::Apply {
                            op: o,
                            args: args.iter().map(|&a| a as usize).collect(),
                        },
                    ));
                }
                true
            });
            c.states_explored += before - budget;
            if outcome.is_err() {
                c.status = ClosureStatus::WorkLimit;
                return Ok(c);
            }
        }
        if found.is_empty() {
            c.status = ClosureStatus::Complete;
            return Ok(c);
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        for (t, d) in found {
            if c.len() >= options.cap {
                c.status = ClosureStatus::CapExceeded;
                c.round_sizes.push(c.len());
                return Ok(c);
            }
            let idx = c.push(&t, d, round);
            if hit(&t) {
                c.status = ClosureStatus::TargetHit(idx);
                c.round_sizes.push(c.len());
                return Ok(c);
            }
        }
        c.round_sizes.push(c.len());
    }
}

/// [`generate_closure`] over the named operations of `alg` (all when `ops` is empty).
pub fn generate_closure_in(
    alg: &FiniteAlgebra,
    ops: &[&str],
    width: usize,
    generators: &[Vec<Elem>],
    options: &ClosureOptions,
    target: Option<&dyn Fn(&[Elem]) -> bool>,
) -> Result<WitnessedClosure, AlgebraError> {
    let selected = alg.restrict(ops)?;
    let list: Vec<(Name, &OperationTable)> = selected.ops().map(|(s, t)| (s.clone(), t)).collect();
    generate_closure(&list, width, generators, options, target)
}

/// The witness term of element `i` over generator variables `g1..gk`.
pub fn extract_witness(c: &WitnessedClosure, i: usize) -> Result<TermFn, AlgebraError> {
    if i >= c.len() {
        return Err(AlgebraError::ElementAbsent);
    }
    let params: Vec<Name> = (1..=c.generator_count).map(|k| name(&alloc::format!("g{k}"))).collect();
    let mut bank = TermBank::new();
    let mut memo: HashMap<usize, Term> = HashMap::new();
    // Derivations only point to earlier elements, so a forward pass suffices.
    let mut needed = alloc::vec![false; i + 1];
    needed[i] = true;
    for e in (0..=i).rev() {
        if needed[e] {
            if let Derivation::Apply { args, .. } = &c.derivations[e] {
                for &a in args {
                    needed[a] = true;
                }
            }
        }
    }
    for e in 0..=i {
        if !needed[e] {
            continue;
        }
        let t = match &c.derivations[e] {
            Derivation::Generator(g) => bank.var(params[*g].clone()),
            Derivation::Apply { op, args } => {
                let children = args.iter().map(|a| memo[a].clone()).collect();
                bank.app(c.op_names[*op].clone(), children)
            }
        };
        memo.insert(e, t);
    }
    Ok(TermFn::new(params, memo.remove(&i).expect("element derived")))
}

/// Witness of a tuple, if it lies in the closure.
pub fn witness_of(c: &WitnessedClosure, t: &[Elem]) -> Result<TermFn, AlgebraError> {
    extract_witness(c, c.find(t).ok_or(AlgebraError::ElementAbsent)?)
}

/// The `n` projections of `A^(A^n)`: coordinate `p` of the `i`-th
/// projection is the `i`-th digit of `p` in radix `|A|`.
pub fn projection_generators(size: usize, n: usize) -> Result<Vec<Vec<Elem>>, AlgebraError> {
    let width = table_len(size, n).ok_or(AlgebraError::TooLarge { size, arity: n })?;
    Ok((0..n)
        .map(|i| OperationTable::projection(size, n, i).table().to_vec())
        .inspect(|t| {
            debug_assert_eq!(t.len(), width);
        })
        .collect())
}

/// All `n`-ary term operations of `alg` over the selected operations, as
/// tables in `A^(A^n)` with witness terms in `g1..gn`.
pub fn term_clone_slice(
    alg: &FiniteAlgebra,
    ops: &[&str],
    n: usize,
    options: &ClosureOptions,
) -> Result<WitnessedClosure, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::ZeroArity);
    }
    let gens = projection_generators(alg.size(), n)?;
    let width = gens[0].len();
    generate_closure_in(alg, ops, width, &gens, options, None)
}

/// Evaluates a witness term on the generators coordinate by coordinate.
pub fn replay(alg: &FiniteAlgebra, c_generators: &[Vec<Elem>], witness: &TermFn) -> Result<Vec<Elem>, AlgebraError> {
    let model = super::Model::plain(alg);
    let mut p = model.prepare(&witness.body, &witness.params)?;
    let width = c_generators.first().map_or(0, Vec::len);
    let mut args = alloc::vec![0; c_generators.len()];
    Ok((0..width)
        .map(|col| {
            for (a, g) in args.iter_mut().zip(c_generators) {
                *a = g[col];
            }
            p.eval(&args)
        })
        .collect())
}

impl core::fmt::Display for ClosureStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ClosureStatus::Complete => f.write_str("complete"),
            ClosureStatus::TargetHit(i) => write!(f, "target hit at element {i}"),
            ClosureStatus::CapExceeded => f.write_str("cap exceeded"),
            ClosureStatus::WorkLimit => f.write_str("work limit"),
        }
    }
}

impl ClosureStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ClosureStatus::Complete => "complete",
            ClosureStatus::TargetHit(_) => "target_hit",
            ClosureStatus::CapExceeded => "cap_exceeded",
            ClosureStatus::WorkLimit => "work_limit",
        }
    }
}

impl WitnessedClosure {
    /// Short description for reports.
    pub fn summary(&self) -> alloc::string::String {
        alloc::format!("{} elements, {} rounds, {}", self.len(), self.rounds(), self.status)
    }
}

//! Polymorphism search by backtracking with arc consistency.
//!
//! Table cells are the variables. Shape constraints pin cells (idempotent,
//! near unanimity) or merge them (weak near unanimity). Compatibility with
//! the digraph is a binary constraint `(f(ū), f(v̄)) ∈ E` for every
//! coordinatewise edge `ū → v̄` of `E^k`.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::digraph::Digraph;
use super::LoopError;
use crate::algebra::{check_shape, compatible, for_each_tuple, table_len, Elem, OperationTable, ShapeKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShapeConstraints {
    pub idempotent: bool,
    pub nu: bool,
    pub wnu: bool,
}

impl ShapeConstraints {
    pub const NU: ShapeConstraints = ShapeConstraints {
        idempotent: true,
        nu: true,
        wnu: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolymorphismOutcome {
    Found(OperationTable),
    None,
    BudgetExceeded(BudgetExceeded),
}

struct Problem {
    n: usize,
    class_of: Vec<usize>,
    /// Per class: constraint arcs `(other, forward)`; forward means this
    /// class is the source of the edge.
    arcs: Vec<Vec<(usize, bool)>>,
    out_mask: Vec<u64>,
    in_mask: Vec<u64>,
    budget: u64,
    nodes: u64,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Problem {
    /// Values with an edge into `set`.
    fn pre(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, y| acc | self.in_mask[y])
    }

    fn post(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, x| acc | self.out_mask[x])
    }

    /// AC-3 from the given changed classes; false on a wipeout.
    fn propagate(&self, dom: &mut [u64], changed: impl IntoIterator<Item = usize>) -> bool {
        let mut queue: VecDeque<usize> = changed.into_iter().collect();
        let mut queued = alloc::vec![false; dom.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            for &(o, forward) in &self.arcs[c] {
                // Supports for `o` given the domain of `c`.
                let support = if forward { self.post(dom[c]) } else { self.pre(dom[c]) };
                let next = dom[o] & support;
                if next != dom[o] {
                    if next == 0 {
                        return false;
                    }
                    dom[o] = next;
                    if !queued[o] {
                        queued[o] = true;
                        queue.push_back(o);
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, dom: &mut Vec<u64>) -> Result<bool, BudgetExceeded> {
        let Some(c) = (0..dom.len())
            .filter(|&c| dom[c].count_ones() > 1)
            .min_by_key(|&c| (dom[c].count_ones(), c))
        else {
            return Ok(true);
        };
        for v in bits(dom[c]) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(BudgetExceeded { nodes: self.nodes });
            }
            let mut next = dom.clone();
            next[c] = 1 << v;
            if self.propagate(&mut next, [c]) && self.search(&mut next)? {
                *dom = next;
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if set == 0 {
            return None;
        }
        let b = set.trailing_zeros() as usize;
        set &= set - 1;
        Some(b)
    })
}

/// Searches for a `k`-ary polymorphism of `d` with the requested shape.
/// Variable order is smallest domain first (ties by cell index), values
/// ascending; `budget` bounds the number of search nodes.
pub fn find_polymorphism(
    d: &Digraph,
    arity: usize,
    constraints: ShapeConstraints,
    budget: u64,
) -> Result<PolymorphismOutcome, LoopError> {
    let n = d.size();
    if n == 0 || n > 64 || arity == 0 {
        return Err(LoopError::SearchSize { size: n, arity });
    }
    if constraints.nu && arity < 3 {
        return Err(LoopError::SearchSize { size: n, arity });
    }
    let cells = table_len(n, arity)
        .filter(|&c| c <= 1 << 22)
        .ok_or(LoopError::SearchSize { size: n, arity })?;
    let index = |t: &[Elem]| t.iter().fold(0usize, |acc, &a| acc * n + a as usize);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    // Near-unanimous cells and their majority value.
    let mut parent: Vec<usize> = (0..cells).collect();
    let mut pin: Vec<u64> = alloc::vec![full; cells];
    let mut t = alloc::vec![0 as Elem; arity];
    for x in 0..n as Elem {
        for y in 0..n as Elem {
            let mut first = None;
            for i in 0..arity {
                t.fill(x);
                t[i] = y;
                let c = index(&t);
                if constraints.nu || (constraints.idempotent && x == y) {
                    pin[c] &= 1 << x;
                }
                if constraints.wnu {
                    match first {
                        None => first = Some(c),
                        Some(f) => {
                            let (a, b) = (find(&mut parent, f), find(&mut parent, c));
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
    }
    let mut class_of = alloc::vec![0; cells];
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_class = alloc::vec![usize::MAX; cells];
    for c in 0..cells {
        let r = find(&mut parent, c);
        if rep_class[r] == usize::MAX {
            rep_class[r] = reps.len();
            reps.push(r);
        }
        class_of[c] = rep_class[r];
    }
    let mut dom = alloc::vec![full; reps.len()];
    for c in 0..cells {
        dom[class_of[c]] &= pin[c];
    }

    let edges = d.edges();
    let loops: u64 = d.loops().iter().fold(0, |acc, &v| acc | 1 << v);
    let mut arcs: Vec<Vec<(usize, bool)>> = alloc::vec![Vec::new(); reps.len()];
    let mut seen = crate::HashSet::new();
    let mut src = alloc::vec![0 as Elem; arity];
    let mut dst = alloc::vec![0 as Elem; arity];
    for_each_tuple(edges.len(), arity, |choice| {
        for (i, &e) in choice.iter().enumerate() {
            (src[i], dst[i]) = edges[e as usize];
        }
        let (u, v) = (class_of[index(&src)], class_of[index(&dst)]);
        if u == v {
            dom[u] &= loops;
        } else if seen.insert((u, v)) {
            arcs[u].push((v, true));
            arcs[v].push((u, false));
        }
        true
    });

    let mut problem = Problem {
        n,
        class_of,
        arcs,
        out_mask: (0..n as Elem).map(|v| d.out_neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect(),
        in_mask: (0..n as Elem).map(|v| d.in_neighbors(v).iter().fold(0, |acc, &w| acc | 1 << w)).collect(),
        budget,
        nodes: 0,
    };
    if dom.contains(&0) || !problem.propagate(&mut dom, 0..reps.len()) {
        return Ok(PolymorphismOutcome::None);
    }
    match problem.search(&mut dom) {
        Err(b) => Ok(PolymorphismOutcome::BudgetExceeded(b)),
        Ok(false) => Ok(PolymorphismOutcome::None),
        Ok(true) => {
            let table: Vec<Elem> = problem.class_of.iter().map(|&c| dom[c].trailing_zeros() as Elem).collect();
            let op = OperationTable::new(problem.n, arity, table).expect("values come from domains");
            assert!(compatible(&op, d), "search produced an incompatible table");
            assert!(!constraints.nu || check_shape(&op, ShapeKind::Nu).unwrap_or(false));
            assert!(!constraints.wnu || check_shape(&op, ShapeKind::Wnu).unwrap_or(false) || arity < 2);
            assert!(!constraints.idempotent || op.is_idempotent());
            Ok(PolymorphismOutcome::Found(op))
        }
    }
}

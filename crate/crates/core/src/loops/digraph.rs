use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::algebra::{Elem, Relation};

use super::LoopError;

/// Binary relations viewed as directed graphs.
pub type Digraph = Relation;

/// `R^k`: pairs joined by an `R`-walk of length exactly `k` (`k ≥ 1`).
pub fn compose_power(r: &Relation, k: usize) -> Relation {
    assert!(k >= 1, "composition power must be positive");
    let mut out = r.clone();
    for _ in 1..k {
        out = out.compose(r);
    }
    out
}

/// A shortest odd cycle of a symmetric relation as a vertex list
/// `v1..vl` (edges `vi→vi+1` and `vl→v1`). A loop is a cycle of length one.
pub fn find_odd_cycle(r: &Relation) -> Result<Option<Vec<Elem>>, LoopError> {
    if let Some((a, b)) = r.symmetry_failure() {
        return Err(LoopError::NotSymmetric { a, b });
    }
    let n = r.size();
    let adj: Vec<Vec<Elem>> = (0..n as Elem).map(|v| r.out_neighbors(v)).collect();
    let mut best: Option<Vec<Elem>> = None;
    for root in 0..n as Elem {
        if adj[root as usize].is_empty() {
            continue;
        }
        let mut dist = alloc::vec![usize::MAX; n];
        let mut parent = alloc::vec![Elem::MAX; n];
        dist[root as usize] = 0;
        let mut queue = VecDeque::from([root]);
        let mut found: Option<(Elem, Elem)> = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for &w in &adj[u as usize] {
                if dist[w as usize] == usize::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    queue.push_back(w);
                } else if dist[w as usize] == dist[u as usize] {
                    found = Some((u, w));
                    break 'bfs;
                }
            }
        }
        let Some((u, w)) = found else { continue };
        let len = 2 * dist[u as usize] + 1;
        if best.as_ref().is_some_and(|b| b.len() <= len) {
            continue;
        }
        let path_to = |mut v: Elem| {
            let mut p = Vec::new();
            while v != root {
                p.push(v);
                v = parent[v as usize];
            }
            p.reverse();
            p
        };
        let mut cycle = alloc::vec![root];
        cycle.extend(path_to(u));
        let mut back = path_to(w);
        back.reverse();
        cycle.extend(back);
        best = Some(cycle);
    }
    Ok(best)
}

/// The closed walk `cycle` lies in `r` (edges between consecutive entries
/// and from the last back to the first).
pub fn is_closed_walk(r: &Relation, cycle: &[Elem]) -> bool {
    !cycle.is_empty() && (0..cycle.len()).all(|i| r.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
}

/// First loop of `r` in vertex order.
pub fn brute_loop(r: &Relation) -> Option<(Elem, Elem)> {
    r.loops().first().map(|&a| (a, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphClass {
    pub smooth: bool,
    pub algebraic_length_one: bool,
    pub has_loop: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Smoothness, algebraic length one and loop presence.
///
/// Within a weakly connected component, a BFS potential `p` over the
/// underlying graph makes each edge `u→v` carry the defect `p(u)+1-p(v)`.
/// Net lengths of closed walks are exactly the subgroup generated by the
/// defects, so a component has a closed walk of net length one iff the gcd
/// of its defects is one.
pub fn graph_class(d: &Digraph) -> GraphClass {
    let n = d.size();
    let out: Vec<Vec<Elem>> = (0..n as Elem).map(|v| d.out_neighbors(v)).collect();
    let inn: Vec<Vec<Elem>> = (0..n as Elem).map(|v| d.in_neighbors(v)).collect();
    let smooth = (0..n).all(|v| out[v].is_empty() == inn[v].is_empty());

    let mut potential: Vec<Option<i64>> = alloc::vec![None; n];
    let mut algebraic_length_one = false;
    for root in 0..n {
        if potential[root].is_some() || (out[root].is_empty() && inn[root].is_empty()) {
            continue;
        }
        potential[root] = Some(0);
        let mut component = alloc::vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = potential[u].expect("visited");
            let steps = out[u].iter().map(|&v| (v, 1)).chain(inn[u].iter().map(|&v| (v, -1)));
            for (v, dir) in steps {
                if potential[v as usize].is_none() {
                    potential[v as usize] = Some(pu + dir);
                    component.push(v as usize);
                    queue.push_back(v as usize);
                }
            }
        }
        let mut g = 0;
        for &u in &component {
            for &v in &out[u] {
                let defect = potential[u].expect("visited") + 1 - potential[v as usize].expect("visited");
                g = gcd(g, defect.unsigned_abs());
            }
        }
        if g == 1 {
            algebraic_length_one = true;
        }
    }
    GraphClass {
        smooth,
        algebraic_length_one,
        has_loop: !d.loops().is_empty(),
    }
}

/// Canonical adjacency code of a digraph on at most 8 vertices: vertices
/// are ordered by (out-degree, in-degree, loop) and the code is minimized
/// over permutations inside each block. Isomorphic digraphs get equal codes.
pub fn canonical_code(d: &Digraph) -> u64 {
    let n = d.size();
    assert!(n <= 8, "canonical codes are for digraphs on at most 8 vertices");
    let key = |v: Elem| (d.out_neighbors(v).len(), d.in_neighbors(v).len(), d.has_edge(v, v));
    let mut order: Vec<Elem> = (0..n as Elem).collect();
    order.sort_by_key(|&v| key(v));
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || key(order[i]) != key(order[start]) {
            blocks.push((start, i));
            start = i;
        }
    }
    let code_of = |perm: &[Elem]| {
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                code = code << 1 | d.has_edge(perm[i], perm[j]) as u64;
            }
        }
        code
    };
    let mut best = u64::MAX;
    permute_blocks(&mut order, &blocks, 0, &mut |perm| best = best.min(code_of(perm)));
    best
}

fn permute_blocks(order: &mut Vec<Elem>, blocks: &[(usize, usize)], b: usize, visit: &mut dyn FnMut(&[Elem])) {
    let Some(&(lo, hi)) = blocks.get(b) else {
        visit(order);
        return;
    };
    // Heap's algorithm on order[lo..hi].
    let k = hi - lo;
    let mut c = alloc::vec![0usize; k];
    permute_blocks(order, blocks, b + 1, visit);
    let mut i = 1;
    while i < k {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            order.swap(lo + j, lo + i);
            permute_blocks(order, blocks, b + 1, visit);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Loopless digraph on `n` vertices whose off-diagonal adjacency bits are `mask`.
pub fn digraph_from_mask(n: usize, mask: u64) -> Digraph {
    let mut d = Relation::empty(n, 2);
    let mut bit = 0;
    for u in 0..n as Elem {
        for v in 0..n as Elem {
            if u != v {
                if mask >> bit & 1 == 1 {
                    d.insert(&[u, v]);
                }
                bit += 1;
            }
        }
    }
    d
}

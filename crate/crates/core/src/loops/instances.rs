//! Seeded random inputs for the loop lemma.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{generate_closure, near_unanimous_value, ClosureOptions, Elem, OperationTable, Relation};
use crate::term::name;

/// A uniformly random `arity`-ary near unanimity operation on `size` elements.
pub fn random_nu(size: usize, arity: usize, rng: &mut impl Rng) -> OperationTable {
    assert!(arity >= 3, "near unanimity needs arity at least 3");
    OperationTable::from_fn(size, arity, |a| {
        near_unanimous_value(a).unwrap_or_else(|| rng.random_range(0..size as Elem))
    })
}

/// A symmetric relation closed under a near unanimity operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuInstance {
    pub op: OperationTable,
    /// Closure of the symmetric seed under `op`.
    pub relation: Relation,
    /// Odd cycle of the seed, as a vertex list.
    pub seed_cycle: Vec<Elem>,
}

/// Instance `seed`: universe of 3 to `max_size` elements, a random ternary
/// near unanimity operation, and the closure of a seed made of an odd cycle
/// on distinct vertices plus a few random symmetric edges.
pub fn nu_closure_instance(seed: u64, max_size: usize) -> NuInstance {
    assert!(max_size >= 3, "instances need at least 3 elements");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.random_range(3..=max_size);
    let op = random_nu(size, 3, &mut rng);
    let mut vertices: Vec<Elem> = (0..size as Elem).collect();
    vertices.shuffle(&mut rng);
    let odd: Vec<usize> = (3..=size).filter(|l| l % 2 == 1).collect();
    let len = odd[rng.random_range(0..odd.len())];
    let cycle: Vec<Elem> = vertices[..len].to_vec();
    let mut edges: Vec<(Elem, Elem)> = (0..len).map(|i| (cycle[i], cycle[(i + 1) % len])).collect();
    for _ in 0..rng.random_range(0..=size / 2) {
        let a = rng.random_range(0..size as Elem);
        let b = rng.random_range(0..size as Elem);
        if a != b {
            edges.push((a, b));
        }
    }
    let mut seed_rel = Relation::empty(size, 2);
    for &(a, b) in &edges {
        seed_rel.insert(&[a, b]);
        seed_rel.insert(&[b, a]);
    }
    let gens = seed_rel.tuples();
    let closure = generate_closure(&[(name("f"), &op)], 2, &gens, &ClosureOptions::default(), None)
        .expect("generators are valid pairs");
    let relation = Relation::from_tuples(size, 2, closure.elements()).expect("closure stays in the universe");
    NuInstance {
        op,
        relation,
        seed_cycle: cycle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_shape, compatible, ShapeKind};
    use crate::loops::{brute_loop, find_loop, find_loop_constructive, LoopMode, LoopOptions};

    #[test]
    fn instances_are_valid() {
        for seed in 0..40 {
            let inst = nu_closure_instance(seed, 7);
            assert!(check_shape(&inst.op, ShapeKind::Nu).unwrap());
            assert!(inst.relation.is_symmetric());
            assert!(compatible(&inst.op, &inst.relation));
            let cert = find_loop(&inst.relation, &inst.op, LoopMode::Nu, LoopOptions::default()).unwrap();
            assert!(cert.verify(&inst.relation));
            assert!(brute_loop(&inst.relation).is_some());
            let deep = find_loop_constructive(
                &inst.relation,
                &inst.op,
                &inst.op,
                &inst.seed_cycle,
                LoopOptions::default(),
            )
            .unwrap();
            assert!(deep.verify(&inst.relation));
        }
    }
}

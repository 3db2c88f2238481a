use alloc::vec::Vec;

use super::table::{increment, table_len};
use super::{AlgebraError, Elem};

/// An `m`-ary relation on `{0..size-1}`, stored as a bitset over all
/// `size^m` tuples in radix order. Binary relations double as digraphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    power: usize,
    bits: Vec<u64>,
}

impl Relation {
    pub fn empty(size: usize, power: usize) -> Relation {
        let len = table_len(size, power).expect("relation fits in memory");
        Relation {
            size,
            power,
            bits: alloc::vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(size: usize, power: usize) -> Relation {
        let mut r = Relation::empty(size, power);
        let len = table_len(size, power).expect("relation fits in memory");
        for i in 0..len {
            r.bits[i / 64] |= 1 << (i % 64);
        }
        r
    }

    pub fn from_tuples<T: AsRef<[Elem]>>(
        size: usize,
        power: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Result<Relation, AlgebraError> {
        let mut r = Relation::empty(size, power);
        for (i, t) in tuples.into_iter().enumerate() {
            let t = t.as_ref();
            if t.len() != power {
                return Err(AlgebraError::TupleLength {
                    tuple: i,
                    expected: power,
                    found: t.len(),
                });
            }
            if let Some(&v) = t.iter().find(|&&v| v as usize >= size) {
                return Err(AlgebraError::EntryOutOfRange { index: i, value: v, size });
            }
            r.insert(t);
        }
        Ok(r)
    }

    /// Binary relation from an edge list.
    pub fn from_edges(size: usize, edges: &[(Elem, Elem)]) -> Result<Relation, AlgebraError> {
        Relation::from_tuples(size, 2, edges.iter().map(|&(a, b)| [a, b]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn power(&self) -> usize {
        self.power
    }

    fn index(&self, t: &[Elem]) -> usize {
        t.iter().fold(0, |acc, &a| acc * self.size + a as usize)
    }

    pub fn insert(&mut self, t: &[Elem]) -> bool {
        let i = self.index(t);
        let fresh = self.bits[i / 64] & (1 << (i % 64)) == 0;
        self.bits[i / 64] |= 1 << (i % 64);
        fresh
    }

    pub fn remove(&mut self, t: &[Elem]) {
        let i = self.index(t);
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        if t.len() != self.power || t.iter().any(|&a| a as usize >= self.size) {
            return false;
        }
        let i = self.index(t);
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> Vec<Vec<Elem>> {
        let mut out = Vec::with_capacity(self.len());
        let mut t = alloc::vec![0 as Elem; self.power];
        let len = table_len(self.size, self.power).unwrap_or(0);
        for i in 0..len {
            if self.bits[i / 64] & (1 << (i % 64)) != 0 {
                out.push(t.clone());
            }
            increment(&mut t, self.size);
        }
        out
    }

    // Binary relation helpers.

    pub fn has_edge(&self, a: Elem, b: Elem) -> bool {
        self.contains(&[a, b])
    }

    pub fn edges(&self) -> Vec<(Elem, Elem)> {
        debug_assert_eq!(self.power, 2);
        self.tuples().into_iter().map(|t| (t[0], t[1])).collect()
    }

    /// `a⁺ = { b : (a,b) ∈ R }`.
    pub fn out_neighbors(&self, a: Elem) -> Vec<Elem> {
        (0..self.size as Elem).filter(|&b| self.has_edge(a, b)).collect()
    }

    pub fn in_neighbors(&self, b: Elem) -> Vec<Elem> {
        (0..self.size as Elem).filter(|&a| self.has_edge(a, b)).collect()
    }

    /// Vertices with at least one outgoing edge.
    pub fn non_isolated(&self) -> Vec<Elem> {
        (0..self.size as Elem).filter(|&a| !self.out_neighbors(a).is_empty()).collect()
    }

    /// The set `A⁺` of all out-neighbors.
    pub fn all_out_neighbors(&self) -> Vec<Elem> {
        (0..self.size as Elem).filter(|&b| !self.in_neighbors(b).is_empty()).collect()
    }

    /// First edge whose reverse is missing.
    pub fn symmetry_failure(&self) -> Option<(Elem, Elem)> {
        self.edges().into_iter().find(|&(a, b)| !self.has_edge(b, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_failure().is_none()
    }

    pub fn loops(&self) -> Vec<Elem> {
        (0..self.size as Elem).filter(|&a| self.has_edge(a, a)).collect()
    }

    /// Relational composition `R ∘ S = { (a,c) : (a,b) ∈ R, (b,c) ∈ S }`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.size, 2);
        for (a, b) in self.edges() {
            for c in other.out_neighbors(b) {
                out.insert(&[a, c]);
            }
        }
        out
    }

    /// Keeps only tuples whose entries all lie in `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Relation {
        let mut out = Relation::empty(self.size, self.power);
        for t in self.tuples() {
            if t.iter().all(|&a| keep[a as usize]) {
                out.insert(&t);
            }
        }
        out
    }

    /// Inverse of a binary relation.
    pub fn reverse(&self) -> Relation {
        let mut out = Relation::empty(self.size, 2);
        for (a, b) in self.edges() {
            out.insert(&[b, a]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_order() {
        let r = Relation::from_edges(3, &[(2, 0), (0, 1), (1, 0)]).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.edges(), [(0, 1), (1, 0), (2, 0)]);
        assert!(!r.is_symmetric());
        assert_eq!(r.symmetry_failure(), Some((2, 0)));
        assert_eq!(r.out_neighbors(0), [1]);
        assert_eq!(r.in_neighbors(0), [1, 2]);
    }

    #[test]
    fn composition_parity() {
        let r = Relation::from_edges(2, &[(0, 1), (1, 0)]).unwrap();
        let r2 = r.compose(&r);
        assert_eq!(r2.edges(), [(0, 0), (1, 1)]);
        assert_eq!(r2.compose(&r), r);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Relation::from_edges(2, &[(0, 2)]).is_err());
        assert!(Relation::from_tuples(2, 2, [[0u32, 1, 1]]).is_err());
    }
}

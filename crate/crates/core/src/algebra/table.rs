use alloc::vec::Vec;

use super::{AlgebraError, Elem};

/// An operation on `{0..size-1}` stored as a flat row-major table:
/// arguments `(a1..ak)` live at index `a1*n^(k-1) + ... + ak`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperationTable {
    size: usize,
    arity: usize,
    table: Vec<Elem>,
}

/// `size^arity`, or `None` on overflow.
pub fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
    }
    Some(len)
}

impl OperationTable {
    pub fn new(size: usize, arity: usize, table: Vec<Elem>) -> Result<OperationTable, AlgebraError> {
        if arity == 0 {
            return Err(AlgebraError::ZeroArity);
        }
        let expected = table_len(size, arity).ok_or(AlgebraError::TooLarge { size, arity })?;
        if table.len() != expected {
            return Err(AlgebraError::TableLength {
                expected,
                found: table.len(),
            });
        }
        if let Some(index) = table.iter().position(|&v| v as usize >= size) {
            return Err(AlgebraError::EntryOutOfRange {
                index,
                value: table[index],
                size,
            });
        }
        Ok(OperationTable { size, arity, table })
    }

    /// Tabulates `f` over all argument tuples in index order.
    pub fn from_fn(size: usize, arity: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> OperationTable {
        assert!(arity > 0, "operations have positive arity");
        let len = table_len(size, arity).expect("table fits in memory");
        let mut table = Vec::with_capacity(len);
        let mut args = alloc::vec![0 as Elem; arity];
        for _ in 0..len {
            let v = f(&args);
            assert!((v as usize) < size, "value {v} out of range");
            table.push(v);
            increment(&mut args, size);
        }
        OperationTable { size, arity, table }
    }

    /// The `i`-th projection (0-based).
    pub fn projection(size: usize, arity: usize, i: usize) -> OperationTable {
        OperationTable::from_fn(size, arity, |a| a[i])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn index(&self, args: &[Elem]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a as usize)
    }

    pub fn get(&self, args: &[Elem]) -> Elem {
        self.table[self.index(args)]
    }

    pub fn at(&self, index: usize) -> Elem {
        self.table[index]
    }

    /// Decodes a table index into its argument tuple.
    pub fn args_of(&self, mut index: usize, out: &mut [Elem]) {
        for slot in out.iter_mut().rev() {
            *slot = (index % self.size) as Elem;
            index /= self.size;
        }
    }

    /// First `a` with `f(a,...,a) != a`.
    pub fn idempotency_failure(&self) -> Option<Elem> {
        (0..self.size as Elem).find(|&a| self.get(&alloc::vec![a; self.arity]) != a)
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotency_failure().is_none()
    }

    /// The operation with its arguments permuted: `g(a) = f(a[perm[0]], ...)`.
    pub fn permuted(&self, perm: &[usize]) -> OperationTable {
        let mut buf = alloc::vec![0; self.arity];
        OperationTable::from_fn(self.size, self.arity, |a| {
            for (slot, &p) in buf.iter_mut().zip(perm) {
                *slot = a[p];
            }
            self.get(&buf)
        })
    }
}

/// Advances `args` to the next tuple in radix order; wraps to all zeros.
pub fn increment(args: &mut [Elem], size: usize) -> bool {
    for slot in args.iter_mut().rev() {
        *slot += 1;
        if (*slot as usize) < size {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Iterates over all tuples of the given length in radix order.
pub fn for_each_tuple(size: usize, len: usize, mut f: impl FnMut(&[Elem]) -> bool) -> bool {
    let mut args = alloc::vec![0 as Elem; len];
    if size == 0 && len > 0 {
        return true;
    }
    loop {
        if !f(&args) {
            return false;
        }
        if !increment(&mut args, size) {
            return true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing() {
        let t = OperationTable::from_fn(3, 2, |a| a[0]);
        assert_eq!(t.index(&[2, 1]), 7);
        assert_eq!(t.get(&[2, 1]), 2);
        let mut out = [0; 2];
        t.args_of(7, &mut out);
        assert_eq!(out, [2, 1]);
    }

    #[test]
    fn validation() {
        assert!(matches!(OperationTable::new(2, 2, alloc::vec![0, 1, 1]), Err(AlgebraError::TableLength { .. })));
        assert!(matches!(
            OperationTable::new(2, 1, alloc::vec![0, 2]),
            Err(AlgebraError::EntryOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn majority_table() {
        let maj = OperationTable::new(2, 3, alloc::vec![0, 0, 0, 1, 0, 1, 1, 1]).unwrap();
        assert_eq!(maj.get(&[1, 0, 1]), 1);
        assert!(maj.is_idempotent());
    }
}

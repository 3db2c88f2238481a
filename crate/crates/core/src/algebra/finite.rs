use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{AlgebraError, Elem, OperationTable};
use crate::term::{name, Name, Signature};

/// A universe `{0..size-1}` with named basic operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    ops: BTreeMap<Name, OperationTable>,
}

impl FiniteAlgebra {
    pub fn new(size: usize) -> Result<FiniteAlgebra, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        Ok(FiniteAlgebra {
            size,
            ops: BTreeMap::new(),
        })
    }

    pub fn with_op(mut self, symbol: &str, table: OperationTable) -> Result<FiniteAlgebra, AlgebraError> {
        self.add_op(symbol, table)?;
        Ok(self)
    }

    pub fn add_op(&mut self, symbol: &str, table: OperationTable) -> Result<(), AlgebraError> {
        if table.size() != self.size {
            return Err(AlgebraError::SizeMismatch {
                expected: self.size,
                found: table.size(),
            });
        }
        self.ops.insert(name(symbol), table);
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn op(&self, symbol: &str) -> Option<&OperationTable> {
        self.ops.get(symbol)
    }

    pub fn require_op(&self, symbol: &str) -> Result<&OperationTable, AlgebraError> {
        self.op(symbol).ok_or_else(|| AlgebraError::UnknownOp(symbol.to_string()))
    }

    /// Operations in name order.
    pub fn ops(&self) -> impl Iterator<Item = (&Name, &OperationTable)> {
        self.ops.iter()
    }

    pub fn op_names(&self) -> Vec<Name> {
        self.ops.keys().cloned().collect()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for (s, t) in &self.ops {
            sig.declare(s, t.arity()).expect("operation names are valid symbols");
        }
        sig
    }

    /// First operation (by name) that is not idempotent, with the witness element.
    pub fn idempotency_failure(&self) -> Option<(Name, Elem)> {
        self.ops.iter().find_map(|(s, t)| t.idempotency_failure().map(|a| (s.clone(), a)))
    }

    pub fn is_idempotent(&self) -> bool {
        self.idempotency_failure().is_none()
    }

    /// The subset of operations named in `symbols` (all when empty).
    pub fn restrict(&self, symbols: &[&str]) -> Result<FiniteAlgebra, AlgebraError> {
        if symbols.is_empty() {
            return Ok(self.clone());
        }
        let mut out = FiniteAlgebra::new(self.size)?;
        for s in symbols {
            out.add_op(s, self.require_op(s)?.clone())?;
        }
        Ok(out)
    }
}

/// Common algebras used in examples and tests.
pub mod samples {
    use super::*;

    pub fn majority() -> OperationTable {
        OperationTable::from_fn(2, 3, |a| if a[0] + a[1] + a[2] >= 2 { 1 } else { 0 })
    }

    pub fn xor3() -> OperationTable {
        OperationTable::from_fn(2, 3, |a| a[0] ^ a[1] ^ a[2])
    }

    /// Median on the chain `0 < 1 < ... < n-1`.
    pub fn median(n: usize) -> OperationTable {
        OperationTable::from_fn(n, 3, |a| {
            let mut s = [a[0], a[1], a[2]];
            s.sort_unstable();
            s[1]
        })
    }

    pub fn meet(n: usize) -> OperationTable {
        OperationTable::from_fn(n, 2, |a| a[0].min(a[1]))
    }

    pub fn algebra(size: usize, symbol: &str, table: OperationTable) -> FiniteAlgebra {
        FiniteAlgebra::new(size).and_then(|a| a.with_op(symbol, table)).expect("sample algebra")
    }
}

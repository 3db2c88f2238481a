//! Finite algebras, relations and subpower generation.

mod absorb;
mod closure;
mod eval;
mod finite;
mod relation;
mod shape;
mod table;

use alloc::string::String;

pub use absorb::{
    absorbs, absorption_failure, compatibility_failure, compatible, enough_absorption_failure, near_unanimous_value,
    nu_from_semiabsorbing, produces_enough_absorption, square_absorption_failure, semiabsorbing_ii_prime,
    CompatibilityFailure, NeighborhoodFailure,
};
pub use closure::{
    extract_witness, for_each_image, generate_closure, generate_closure_in, projection_generators, replay,
    term_clone_slice, witness_of, ClosureOptions, ClosureStatus, Derivation, Residual, WitnessedClosure, WorkLimit,
};
pub use eval::{eval_term, satisfies, Failure, Model, PreparedTerm};
pub use finite::{samples, FiniteAlgebra};
pub use relation::Relation;
pub use shape::{
    check_shape, is_taylor_operation, shape_failure, taylor_system_holds, ShapeKind, TaylorReport, TAYLOR_MAX_ARITY,
};
pub use table::{for_each_tuple, increment, table_len, OperationTable};

/// Universe elements are `0..size`.
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operations must have positive arity")]
    ZeroArity,
    #[error("table for size {size} and arity {arity} is too large")]
    TooLarge { size: usize, arity: usize },
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("entry {index} is {value}, outside universe of size {size}")]
    EntryOutOfRange { index: usize, value: Elem, size: usize },
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("universe size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error("tuple {tuple} has length {found}, expected {expected}")]
    TupleLength { tuple: usize, expected: usize, found: usize },
    #[error("symbol `{0}` is not bound")]
    UnboundSymbol(String),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("symbol `{symbol}` has arity {expected}, applied to {found} arguments")]
    ArityMismatch { symbol: String, expected: usize, found: usize },
    #[error("cap {cap} is below the {generators} generators")]
    CapBelowGenerators { cap: usize, generators: usize },
    #[error("element is not in the closure")]
    ElementAbsent,
    #[error("shape {kind} is not defined for arity {arity}")]
    ShapeArity { kind: &'static str, arity: usize },
    #[error("relation is not symmetric: ({a},{b}) has no reverse")]
    NotSymmetric { a: Elem, b: Elem },
}

//! Terms, signatures and equation systems, with the syntactic analyses
//! that need no algebra: triviality, Taylor shapes and double loop
//! normalization.

mod builtin;
mod double_loop;
mod node;
mod sexpr;
mod system;
mod taylor;
mod trivial;

use alloc::string::String;

pub use builtin::{builtin_names, builtin_system, parse_builtin};
pub use double_loop::{canonical_columns, double_loop_rows, double_loop_system, normalize_two_equation, ColumnMatrix, Normalized};
pub use node::{name, star_compose, Name, Term, TermBank, TermFn, TermKind};
pub use sexpr::{equation_text, parse_equation_chain, parse_term, parse_term_fn, parse_term_in};
pub use system::{idempotency_equation, Equation, EquationSystem, Signature};
pub use taylor::{
    is_taylor_shape, single_nontrivial_equation, taylor_to_pair_system, xy_row, NotTaylorShape, TaylorSystem, XY,
};
pub use trivial::{check_trivial, reduce_by_projection, ProjectionAssignment};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("unexpected end of input at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("unexpected ')' at byte {offset}")]
    UnexpectedClose { offset: usize },
    #[error("unbalanced parenthesis opened at byte {offset}")]
    Unbalanced { offset: usize },
    #[error("trailing input at byte {offset}")]
    TrailingInput { offset: usize },
    #[error("empty input")]
    Empty,
    #[error("empty list at byte {offset}")]
    EmptyList { offset: usize },
    #[error("list in head position at byte {offset}")]
    ListHead { offset: usize },
    #[error("undeclared symbol `{symbol}` at byte {offset}")]
    UndeclaredSymbol { symbol: String, offset: usize },
    #[error("`{symbol}` expects {expected} arguments, found {found} (byte {offset})")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("expected `(= lhs rhs ...)` at byte {offset}")]
    NotAnEquation { offset: usize },
    #[error("symbol `{symbol}` declared with arity 0")]
    ZeroArity { symbol: String },
    #[error("`{symbol}` is not a valid symbol name")]
    BadSymbol { symbol: String },
    #[error("symbol `{symbol}` declared twice with different arities")]
    DuplicateSymbol { symbol: String },
    #[error("variable `{name}` clashes with a declared symbol")]
    VariableShadowsSymbol { name: String },
    #[error("unknown builtin system `{name}`")]
    UnknownBuiltin { name: String },
    #[error("invalid parameter for `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("expected `(fn (params ...) body)` at byte {offset}")]
    NotATermFn { offset: usize },
    #[error("wrong shape: {0}")]
    WrongShape(String),
}

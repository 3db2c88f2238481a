//! Workbench for finite idempotent algebras.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`term`]: terms, signatures, equation systems and their syntactic
//!   analysis (triviality, Taylor shapes, double loop normalization and the
//!   catalogue of named conditions);
//! * [`algebra`]: operation tables, evaluation, shape predicates, absorption
//!   and subpower generation with witness extraction;
//! * [`loops`]: digraph analytics, the constructive loop lemma and a
//!   polymorphism search used to probe loop conjectures;
//! * [`forge`]: synthesis of explicit Siggers, double loop, strong double
//!   loop, weak 3-cube and terminator terms, each verified on the source
//!   algebra;
//! * [`prover`]: congruence closure with bounded axiom instantiation and a
//!   finite countermodel finder.
//!
//! File formats, reports and the command line live in the `taylor` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod clock;
pub mod forge;
pub mod loops;
pub mod prover;
pub mod term;

pub use algebra::{Elem, FiniteAlgebra, OperationTable, Relation};
pub use term::{Equation, EquationSystem, Name, Signature, Term, TermFn};

pub(crate) type HashMap<K, V> = hashbrown::HashMap<K, V>;
pub(crate) type HashSet<K> = hashbrown::HashSet<K>;

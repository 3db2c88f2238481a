//! Symbolic verification by congruence closure with bounded axiom
//! instantiation, and search for finite countermodels.

mod countermodel;
mod egraph;
mod suite;

pub use countermodel::{find_countermodel, Countermodel, CountermodelOptions, CountermodelOutcome};
pub use egraph::{cc_prove, ProofOutcome, ProofReport, ProofSession, ProverOptions};
pub use suite::{
    derivation_goals, q_and_c_goals, substitution_goals, terminator_goals, verify_derivation_suite, DerivationGoal,
    SuiteEntry, SuiteGroup, SuiteReport,
};

//! Synthesis of explicit terms: Siggers and double loop terms found in
//! finite free algebras, and the syntactic passages from double loops to
//! strong double loops, weak 3-cube, `q`/`c` and terminator terms.

mod free;
mod recipe;
mod scheme;

use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

pub use free::{double_loop_from_taylor, siggers_from_nu, weak_3cube_from_strong_double_loop};
pub use recipe::{explicit_weak3cube_recipe, verify_idempotency_claim, IdempotencyClaim, Membership, RecipeReport};
pub use scheme::{
    q_and_c_from_strong_double_loop, strong_double_loop_from_double_loop, terminator_from_q, QcTerms, StrongDoubleLoop,
    SubstitutionScheme, TerminatorTerms,
};

use crate::algebra::{AlgebraError, ClosureOptions, Elem, FiniteAlgebra, Model};
use crate::clock::{Clock, NoClock};
use crate::term::{EquationSystem, Name, TermFn};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ForgeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operation `{op}` is not a near unanimity operation")]
    NotNu { op: String },
    #[error("operation `{op}` is not idempotent at {elem}")]
    NotIdempotent { op: String, elem: Elem },
    #[error("expected a {expected}-ary operation, found arity {found}")]
    Arity { expected: usize, found: usize },
    #[error("input does not satisfy {system}{}", detail(.failure))]
    Precondition { system: String, failure: Option<String> },
    #[error("synthesized term fails {system}{}", detail(.failure))]
    Verification { system: String, failure: Option<String> },
    #[error("expected membership fails: {label}")]
    Membership { label: String },
}

fn detail(f: &Option<String>) -> String {
    match f {
        Some(s) => alloc::format!(" ({s})"),
        None => String::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthesisStatus {
    Found,
    /// The search space was exhausted without a witness.
    NotTaylor,
    /// A cap or work limit stopped the search.
    Inconclusive,
}

impl SynthesisStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SynthesisStatus::Found => "found",
            SynthesisStatus::NotTaylor => "not_taylor",
            SynthesisStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynthesisStats {
    /// Size of the free algebra realization, then of the searched subpower.
    pub closure_sizes: Vec<usize>,
    pub rounds: usize,
    pub states_explored: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    pub status: SynthesisStatus,
    /// Symbol the term is meant for in the target system.
    pub symbol: Name,
    pub term: Option<TermFn>,
    /// Definitions of derived symbols used inside `term`, in dependency order.
    pub auxiliary: Vec<(Name, TermFn)>,
    pub verified: bool,
    pub stats: SynthesisStats,
}

impl SynthesisResult {
    /// Bindings evaluating the target system: auxiliaries, then the term.
    pub fn binding(&self) -> Vec<(Name, TermFn)> {
        let mut b = self.auxiliary.clone();
        if let Some(t) = &self.term {
            b.push((self.symbol.clone(), t.clone()));
        }
        b
    }
}

#[derive(Clone, Copy)]
pub struct SynthesisOptions<'a> {
    pub closure: ClosureOptions,
    pub clock: &'a dyn Clock,
}

impl Default for SynthesisOptions<'static> {
    fn default() -> Self {
        SynthesisOptions {
            closure: ClosureOptions::default(),
            clock: &NoClock,
        }
    }
}

impl core::fmt::Debug for SynthesisOptions<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SynthesisOptions").field("closure", &self.closure).finish()
    }
}

/// Model-checks `sys` under `binding`, returning the first failure rendered.
pub(crate) fn system_failure(
    alg: &FiniteAlgebra,
    sys: &EquationSystem,
    binding: &[(Name, TermFn)],
) -> Result<Option<String>, AlgebraError> {
    let model = Model::new(alg, binding)?;
    Ok(model.system_failure(sys)?.map(|f| alloc::format!("{f}")))
}

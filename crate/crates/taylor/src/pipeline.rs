//! Double loop → strong double loop → weak 3-cube, `q`/`c` and strong
//! terminator terms on one algebra, each checked on it.

use taylor_core::algebra::{satisfies, AlgebraError};
use taylor_core::forge::{
    double_loop_from_taylor, q_and_c_from_strong_double_loop, strong_double_loop_from_double_loop, terminator_from_q,
    weak_3cube_from_strong_double_loop, ForgeError, QcTerms, StrongDoubleLoop, SynthesisOptions, SynthesisResult,
    SynthesisStatus, TerminatorTerms,
};
use taylor_core::term::{builtin_system, name};
use taylor_core::{FiniteAlgebra, Name, TermFn};

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub double_loop: SynthesisResult,
    /// Remaining stages; absent unless a double loop term was found.
    pub stages: Option<Stages>,
}

#[derive(Clone, Debug)]
pub struct Stages {
    /// Symbolic strong double loop term over `d`.
    pub scheme: StrongDoubleLoop,
    /// The same term with `d` replaced by the double loop term.
    pub strong: TermFn,
    pub strong_verified: bool,
    pub weak_3cube: SynthesisResult,
    pub q_and_c: QcTerms,
    pub q_and_c_verified: bool,
    pub terminator: TerminatorTerms,
    pub terminator_verified: bool,
}

impl Stages {
    pub fn all_verified(&self) -> bool {
        self.strong_verified && self.weak_3cube.verified && self.q_and_c_verified && self.terminator_verified
    }
}

fn inline_qc(qc: &QcTerms, d: &TermFn) -> QcTerms {
    QcTerms {
        c: qc.c.inline("d", d),
        q1: qc.q1.inline("d", d),
        q2: qc.q2.inline("d", d),
    }
}

fn holds(alg: &FiniteAlgebra, system: &str, binding: &[(Name, TermFn)]) -> Result<bool, AlgebraError> {
    let sys = builtin_system(system, None).expect("builtin exists");
    satisfies(alg, &sys, binding)
}

/// Runs every stage on the idempotent operations `ops` of `alg` (all of
/// them when empty).
pub fn run_pipeline(alg: &FiniteAlgebra, ops: &[&str], options: &SynthesisOptions) -> Result<Pipeline, ForgeError> {
    let double_loop = double_loop_from_taylor(alg, ops, options)?;
    let Some(d) = double_loop.term.clone().filter(|_| double_loop.status == SynthesisStatus::Found) else {
        return Ok(Pipeline {
            double_loop,
            stages: None,
        });
    };
    let scheme = strong_double_loop_from_double_loop("d");
    let strong = scheme.term.inline("d", &d);
    let strong_verified = holds(alg, "strong_double_loop", &[(name("d"), strong.clone())])?;
    let weak_3cube = weak_3cube_from_strong_double_loop(alg, &strong, options)?;
    let q_and_c = inline_qc(&q_and_c_from_strong_double_loop("d"), &strong);
    let q_and_c_verified = holds(alg, "q_and_c", &q_and_c.binding())?;
    let terminator = terminator_from_q(&q_and_c);
    let terminator_verified = holds(alg, "strong_terminator", &terminator.binding())?;
    Ok(Pipeline {
        double_loop,
        stages: Some(Stages {
            scheme,
            strong,
            strong_verified,
            weak_3cube,
            q_and_c,
            q_and_c_verified,
            terminator,
            terminator_verified,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use taylor_core::algebra::samples;

    #[test]
    fn boolean_pipelines_verify() {
        for (s, t) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
            let alg = samples::algebra(2, s, t);
            let p = run_pipeline(&alg, &[], &SynthesisOptions::default()).unwrap();
            assert!(p.double_loop.verified);
            assert!(p.stages.unwrap().all_verified(), "{s}");
        }
    }
}

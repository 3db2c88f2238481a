//! Parallel run of the loop conjecture probe.

use rayon::prelude::*;
use taylor_core::clock::Clock;
use taylor_core::loops::{conjecture_candidates, probe, LabEntry, LabMode, LabReport, LoopError};

use crate::report::WallClock;

/// Environment variable fixing the number of worker threads.
pub const THREADS_VAR: &str = "TAYLOR_THREADS";

pub fn thread_count() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool sized by [`THREADS_VAR`], or on the global pool.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match thread_count().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Same report as the sequential core routine, with candidates probed in
/// parallel. Entries keep candidate order, so only timings vary between runs.
pub fn explore_loop_conjecture(max_vertices: usize, arity: usize, mode: LabMode, budget: u64) -> Result<LabReport, LoopError> {
    let set = conjecture_candidates(max_vertices, mode)?;
    let entries = with_pool(|| {
        set.candidates
            .into_par_iter()
            .map(|candidate| {
                let clock = WallClock::start();
                let outcome = probe(&candidate.digraph, arity, budget)?;
                Ok(LabEntry {
                    candidate,
                    outcome,
                    elapsed: clock.now(),
                })
            })
            .collect::<Result<Vec<_>, LoopError>>()
    })?;
    Ok(LabReport {
        max_vertices,
        arity,
        mode,
        budget,
        examined: set.examined,
        filtered: set.filtered,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use taylor_core::clock::NoClock;
    use taylor_core::loops::check_loop_conjecture;

    #[test]
    fn matches_sequential_run() {
        let par = explore_loop_conjecture(3, 3, LabMode::Exhaustive, 100_000).unwrap();
        let seq = check_loop_conjecture(3, 3, LabMode::Exhaustive, 100_000, NoClock).unwrap();
        let outcomes = |r: &LabReport| r.entries.iter().map(|e| (e.candidate.code, e.outcome.clone())).collect::<Vec<_>>();
        assert_eq!(outcomes(&par), outcomes(&seq));
        assert_eq!((par.examined, par.filtered), (seq.examined, seq.filtered));
    }
}

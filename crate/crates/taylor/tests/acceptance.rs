//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use taylor::lab::explore_loop_conjecture;
use taylor::pipeline::run_pipeline;
use taylor_core::algebra::{
    check_shape, compatible, is_taylor_operation, nu_from_semiabsorbing, produces_enough_absorption, samples,
    semiabsorbing_ii_prime, ShapeKind,
};
use taylor_core::forge::{double_loop_from_taylor, siggers_from_nu, SynthesisOptions, SynthesisStatus};
use taylor_core::loops::{brute_loop, find_loop, graph_class, nu_closure_instance, LabMode, LoopMode, LoopOptions};
use taylor_core::prover::{find_countermodel, verify_derivation_suite, CountermodelOptions, CountermodelOutcome, ProverOptions};
use taylor_core::term::{builtin_system, check_trivial, name, TermKind, XY};
use taylor_core::{Elem, EquationSystem, OperationTable, Relation, Term};

use common::Reference;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

/// Every assignment of projections to the symbols, checked by collapsing terms.
fn projection_solution(sys: &EquationSystem) -> Option<HashMap<String, usize>> {
    fn collapse<'t>(t: &'t Term, choice: &HashMap<String, usize>) -> &'t str {
        match t.kind() {
            TermKind::Var(v) => v,
            TermKind::App(s, args) => collapse(&args[choice[&**s]], choice),
        }
    }
    let symbols: Vec<(String, usize)> = sys.signature.iter().map(|(s, n)| (s.to_string(), n)).collect();
    let mut idx = vec![0; symbols.len()];
    loop {
        let choice: HashMap<String, usize> = symbols.iter().zip(&idx).map(|((s, _), &i)| (s.clone(), i)).collect();
        if sys.equations.iter().all(|e| collapse(&e.lhs, &choice) == collapse(&e.rhs, &choice)) {
            return Some(choice);
        }
        let pos = (0..symbols.len()).rev().find(|&k| idx[k] + 1 < symbols[k].1)?;
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
    }
}

fn triviality() -> Check {
    let not_trivial = [
        "maltsev",
        "siggers6",
        "siggers4",
        "wnu(3)",
        "cyclic(3)",
        "double_loop",
        "strong_double_loop",
        "weak_3cube",
        "terminator",
        "strong_terminator",
        "weak_3edge",
    ];
    let trivial = ["associativity", "idempotency(1)", "idempotency(2)", "idempotency(3)", "idempotency(5)"];
    let mut slowest = Duration::ZERO;
    for spec in not_trivial.iter().chain(&trivial) {
        let sys = taylor_core::term::parse_builtin(spec).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let verdict = check_trivial(&sys);
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(1))?;
        slowest = slowest.max(elapsed);
        let oracle = projection_solution(&sys);
        ensure(verdict.is_some() == oracle.is_some(), || format!("{spec}: disagrees with projection enumeration"))?;
        ensure(verdict.is_some() == trivial.contains(spec), || format!("{spec}: wrong classification"))?;
        if let Some(p) = verdict {
            let choice: HashMap<String, usize> = sys.signature.iter().map(|(s, _)| (s.to_string(), p.get(s).map_or(0, |i| i - 1))).collect();
            let single = EquationSystem::new(sys.signature.clone(), sys.equations.clone()).unwrap();
            ensure(
                single.equations.iter().all(|e| {
                    let c = |t: &Term| collapse_owned(t, &choice);
                    c(&e.lhs) == c(&e.rhs)
                }),
                || format!("{spec}: projection witness {p} fails"),
            )?;
        }
    }
    Ok(format!("{} systems, slowest {slowest:.2?}", not_trivial.len() + trivial.len()))
}

fn collapse_owned(t: &Term, choice: &HashMap<String, usize>) -> String {
    match t.kind() {
        TermKind::Var(v) => v.to_string(),
        TermKind::App(s, args) => collapse_owned(&args[choice[&**s]], choice),
    }
}

fn loop_lemma() -> Check {
    let mut times = Vec::new();
    for seed in 0..200 {
        let inst = nu_closure_instance(seed, 7);
        let r = &inst.relation;
        ensure(r.size() <= 7 && r.is_symmetric(), || format!("seed {seed}: bad instance"))?;
        ensure(compatible(&inst.op, r), || format!("seed {seed}: not compatible"))?;
        let start = Instant::now();
        let cert = find_loop(r, &inst.op, LoopMode::Nu, LoopOptions::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        times.push(start.elapsed());
        let (a, b) = cert.pair();
        ensure(a == b && r.contains(&[a, b]), || format!("seed {seed}: ({a},{b}) is not a loop of R"))?;
        ensure(cert.verify(r), || format!("seed {seed}: certificate fails"))?;
        let strictly = cert.frames.iter().all(|f| f.next.is_none_or(|n| n < f.measure))
            && cert.frames.windows(2).all(|w| w[1].measure < w[0].measure);
        ensure(strictly, || format!("seed {seed}: measure does not decrease"))?;
        let has_loop = (0..r.size() as Elem).any(|v| r.contains(&[v, v]));
        ensure(brute_loop(r).is_some() == has_loop && has_loop, || format!("seed {seed}: brute force disagrees"))?;
    }
    times.sort();
    let median = times[times.len() / 2];
    within(median, Duration::from_secs(1))?;
    Ok(format!("200 instances, median {median:.2?}, max {:.2?}", times.last().unwrap()))
}

fn siggers() -> Check {
    let alg = samples::algebra(2, "maj", samples::majority());
    let start = Instant::now();
    let r = siggers_from_nu(&alg, "maj", &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    let t = r.term.ok_or("no term")?;
    ensure(t.arity() == 6 && t.body.symbols().iter().all(|(s, _)| &**s == "maj"), || format!("term {t} is not 6-ary over maj"))?;
    let reference = Reference::new(&alg, &[(name("s"), t.clone())]);
    let sys = builtin_system("siggers6", None).unwrap();
    let triples = 8;
    ensure(reference.holds(&sys), || format!("{t} fails the Siggers equation"))?;
    Ok(format!("{t} holds on all {triples} triples ({elapsed:.2?})"))
}

fn double_loops() -> Check {
    let mut notes = Vec::new();
    for (label, op) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
        let alg = samples::algebra(2, label, op);
        let start = Instant::now();
        let r = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
        within(start.elapsed(), Duration::from_secs(60))?;
        let t = r.term.ok_or(format!("{label}: no term"))?;
        ensure(t.arity() == 12, || format!("{label}: arity {}", t.arity()))?;
        let sys = builtin_system("double_loop", None).unwrap();
        ensure(sys.equations.len() == 2, || "double loop system should have two equations".into())?;
        ensure(Reference::new(&alg, &[(name("d"), t)]).holds(&sys), || format!("{label}: equations fail"))?;
        notes.push(format!("{label} verified"));
    }
    let p = OperationTable::from_fn(3, 2, |a| a[0]);
    let alg = samples::algebra(3, "p", p.clone());
    let start = Instant::now();
    let r = double_loop_from_taylor(&alg, &[], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    ensure(r.status == SynthesisStatus::NotTaylor && r.term.is_none(), || format!("projection algebra: {:?}", r.status))?;
    ensure(!is_taylor_operation(&p).unwrap().is_taylor(), || "projection is Taylor?".into())?;
    notes.push(format!("projection-only: not_taylor after closing {} elements", r.stats.closure_sizes.last().unwrap()));
    Ok(notes.join(", "))
}

fn pipeline() -> Check {
    let start = Instant::now();
    let forbidden = |c: &[XY; 4]| c[0] == c[1] && c[2] == c[3];
    let mut notes = Vec::new();
    for (label, op) in [("xor3", samples::xor3()), ("maj", samples::majority())] {
        let alg = samples::algebra(2, label, op);
        let p = run_pipeline(&alg, &[], &SynthesisOptions::default()).map_err(|e| e.to_string())?;
        let s = p.stages.ok_or(format!("{label}: no double loop"))?;
        let cols = &s.scheme.matrix.columns;
        ensure(cols.len() == 1728 && !cols.iter().any(forbidden), || format!("{label}: forbidden column"))?;
        ensure(s.scheme.matrix.first_forbidden().is_none(), || format!("{label}: column report flags a column"))?;
        let d = name("d");
        let check = |system: &str, defs: &[(taylor_core::Name, taylor_core::TermFn)]| {
            Reference::new(&alg, defs).holds(&builtin_system(system, None).unwrap())
        };
        ensure(check("strong_double_loop", &[(d.clone(), s.strong.clone())]), || format!("{label}: strong double loop fails"))?;
        let w = s.weak_3cube.term.clone().ok_or(format!("{label}: no weak 3-cube term"))?;
        ensure(w.arity() == 6 && s.weak_3cube.verified, || format!("{label}: weak 3-cube not verified"))?;
        ensure(check("weak_3cube", &[(d.clone(), s.strong.clone()), (name("t"), w)]), || format!("{label}: weak 3-cube fails"))?;
        ensure(check("q_and_c", &s.q_and_c.binding()), || format!("{label}: q/c fails"))?;
        ensure(check("strong_terminator", &s.terminator.binding()), || format!("{label}: strong terminator fails"))?;
        notes.push(label);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!("{} verified end to end ({elapsed:.2?})", notes.join(" and ")))
}

fn symbolic_suite() -> Check {
    let start = Instant::now();
    let report = verify_derivation_suite(2, ProverOptions::default());
    let elapsed = start.elapsed();
    if let Some(e) = report.first_unproved() {
        return Err(format!("unproved: {} ({})", e.goal.label, e.outcome.label()));
    }
    for e in &report.entries {
        ensure(e.ablated.is_proved() != e.goal.uses_idempotency, || format!("ablation mismatch on {}", e.goal.label))?;
    }
    within(elapsed, Duration::from_secs(10))?;
    let attributed = report.entries.iter().filter(|e| e.goal.uses_idempotency).count();
    Ok(format!(
        "{} goals proved at depth <= 2, ablation breaks exactly {attributed} ({elapsed:.2?})",
        report.entries.len()
    ))
}

fn loop_conjecture() -> Check {
    let start = Instant::now();
    let small = explore_loop_conjecture(3, 3, LabMode::Exhaustive, 1_000_000).map_err(|e| e.to_string())?;
    ensure(small.counterexamples().count() == 0, || "counterexample on <= 3 vertices".into())?;
    ensure(small.inconclusive() == 0, || "inconclusive entry on <= 3 vertices".into())?;
    for e in &small.entries {
        let c = graph_class(&e.candidate.digraph);
        ensure(c.smooth && c.algebraic_length_one && !c.has_loop, || "candidate fails the filters".into())?;
    }
    let sampled = explore_loop_conjecture(4, 3, LabMode::Sample { count: 1000, seed: 2024 }, 1_000_000).map_err(|e| e.to_string())?;
    ensure(sampled.entries.len() == 1000, || format!("{} sampled digraphs", sampled.entries.len()))?;
    ensure(sampled.counterexamples().count() == 0, || "counterexample in the 4-vertex sample".into())?;
    let rate = sampled.inconclusive() as f64 / sampled.entries.len() as f64;
    ensure(rate <= 0.05, || format!("{:.1}% inconclusive", rate * 100.0))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "{} exhaustive candidates and 1000 sampled 4-vertex digraphs, 0 counterexamples, {:.1}% inconclusive ({elapsed:.2?})",
        small.entries.len(),
        rate * 100.0
    ))
}

fn ternary(code: u32) -> OperationTable {
    OperationTable::new(2, 3, (0..8).map(|i| code >> i & 1).collect()).unwrap()
}

fn brute_taylor(op: &OperationTable) -> bool {
    let induced = |pattern: u32| -> Vec<Elem> {
        (0..4)
            .map(|k: u32| {
                let args: Vec<Elem> = (0..3).map(|i| if pattern >> i & 1 == 1 { k & 1 } else { k >> 1 }).collect();
                op.get(&args)
            })
            .collect()
    };
    let equations = |i: u32| -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for p in (0..8).filter(|p| p >> i & 1 == 0) {
            for q in (0..8).filter(|q| q >> i & 1 == 1) {
                out.push((p, q));
            }
        }
        out
    };
    let holds = |(p, q): (u32, u32)| induced(p) == induced(q);
    equations(0).into_iter().any(|a| {
        equations(1)
            .into_iter()
            .any(|b| equations(2).into_iter().any(|c| holds(a) && holds(b) && holds(c)))
    })
}

fn net_one_walk(r: &Relation) -> bool {
    let n = r.size() as Elem;
    let bound = 2 * n as i64 + 2;
    let edges = r.edges();
    (0..n).any(|start| {
        let mut seen = HashSet::from([(start, 0i64)]);
        let mut stack = vec![(start, 0i64)];
        while let Some((v, net)) = stack.pop() {
            for &(a, b) in &edges {
                for (w, m) in [(a == v).then_some((b, net + 1)), (b == v).then_some((a, net - 1))].into_iter().flatten() {
                    if m.abs() <= bound && seen.insert((w, m)) {
                        stack.push((w, m));
                    }
                }
            }
        }
        seen.contains(&(start, 1))
    })
}

fn oracles() -> Check {
    let mut taylor = 0;
    for code in 0..256 {
        let op = ternary(code);
        let decided = is_taylor_operation(&op).map_err(|e| e.to_string())?.is_taylor();
        ensure(decided == brute_taylor(&op), || format!("table {code:08b} disagrees"))?;
        taylor += decided as usize;
    }
    let mut graphs = 0;
    let mut alo = 0;
    for n in 1..=4usize {
        for mask in 0u32..1 << (n * n) {
            let tuples = (0..n * n).filter(|b| mask >> b & 1 == 1).map(|b| [(b / n) as Elem, (b % n) as Elem]);
            let r = Relation::from_tuples(n, 2, tuples).unwrap();
            let expected = net_one_walk(&r);
            ensure(graph_class(&r).algebraic_length_one == expected, || format!("n={n} mask={mask:b} disagrees"))?;
            graphs += 1;
            alo += expected as usize;
        }
    }
    Ok(format!("256 ternary ops ({taylor} Taylor) and {graphs} digraphs ({alo} of algebraic length one) agree"))
}

fn absorption_chain() -> Check {
    for seed in 0..100 {
        let inst = nu_closure_instance(1000 + seed, 7);
        let (r, op) = (&inst.relation, &inst.op);
        ensure(check_shape(op, ShapeKind::Nu).unwrap() && compatible(op, r), || format!("seed {seed}: bad instance"))?;
        ensure(semiabsorbing_ii_prime(r, op), || format!("seed {seed}: (ii') fails"))?;
        ensure(produces_enough_absorption(r, op).unwrap(), || format!("seed {seed}: not enough absorption"))?;
        let nu = nu_from_semiabsorbing(op);
        ensure(check_shape(&nu, ShapeKind::Nu).unwrap(), || format!("seed {seed}: output is not NU"))?;
        ensure(compatible(&nu, r), || format!("seed {seed}: output not compatible"))?;
    }
    Ok("100 instances".into())
}

/// Ternary term operations of `op` on {0,1}, as 8-bit tables.
fn ternary_clone(op: &OperationTable) -> HashSet<u8> {
    let proj = |i: u32| (0..8u8).fold(0u8, |acc, row| acc | (((row >> (2 - i)) & 1) << row));
    let mut clone: HashSet<u8> = (0..3).map(proj).collect();
    loop {
        let items: Vec<u8> = clone.iter().copied().collect();
        let mut grew = false;
        for &a in &items {
            for &b in &items {
                for &c in &items {
                    let t = (0..8u8).fold(0u8, |acc, row| {
                        let bit = |x: u8| ((x >> row) & 1) as Elem;
                        acc | ((op.get(&[bit(a), bit(b), bit(c)]) as u8) << row)
                    });
                    grew |= clone.insert(t);
                }
            }
        }
        if !grew {
            return clone;
        }
    }
}

fn countermodel() -> Check {
    let start = Instant::now();
    let maltsev = builtin_system("maltsev", None).unwrap();
    let nu = builtin_system("nu", Some(3)).unwrap();
    let wnu = builtin_system("wnu", Some(3)).unwrap();
    let CountermodelOutcome::Found(c) = find_countermodel(&maltsev, &nu, &CountermodelOptions::default()).map_err(|e| e.to_string())? else {
        return Err("no countermodel for Maltsev => NU3".into());
    };
    let xor3 = samples::xor3();
    ensure(c.algebra.size() == 2 && c.algebra.op("f") == Some(&xor3), || "countermodel is not ({0,1}, xor3)".into())?;
    ensure(Reference::new(&c.algebra, &c.hypothesis_binding).holds(&maltsev), || "binding fails Maltsev".into())?;
    let slice = ternary_clone(&xor3);
    let is_nu = |t: u8| [0b001u8, 0b010, 0b100].iter().all(|&y| (t >> y) & 1 == 0 && (t >> (7 - y)) & 1 == 1);
    ensure(slice.len() == 4 && !slice.iter().any(|&t| is_nu(t)), || format!("ternary clone {slice:?}"))?;
    let outcome = find_countermodel(&maltsev, &wnu, &CountermodelOptions::default()).map_err(|e| e.to_string())?;
    ensure(matches!(outcome, CountermodelOutcome::None { .. }), || format!("Maltsev => WNU3 gave {outcome:?}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("({{0,1}}, xor3) found, slice of 4 has no NU; none for WNU3 ({elapsed:.2?})"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("triviality classification", triviality),
        ("constructive loop lemma", loop_lemma),
        ("Siggers synthesis", siggers),
        ("double loop synthesis", double_loops),
        ("downstream pipeline", pipeline),
        ("symbolic derivation suite", symbolic_suite),
        ("loop conjecture reproduction", loop_conjecture),
        ("oracle equivalences", oracles),
        ("absorption chain", absorption_chain),
        ("countermodel", countermodel),
    ];
    let mut failed = 0;
    for (i, (label, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {label} [{elapsed:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {label} [{elapsed:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

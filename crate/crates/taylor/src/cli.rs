use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use taylor_core::algebra::{is_taylor_operation, ClosureOptions};
use taylor_core::clock::Clock;
use taylor_core::forge::{
    q_and_c_from_strong_double_loop, siggers_from_nu, strong_double_loop_from_double_loop, terminator_from_q,
    SynthesisOptions, SynthesisResult, SynthesisStatus,
};
use taylor_core::loops::{find_loop, LabMode, LabReport, LoopMode, LoopOptions, ProbeOutcome};
use taylor_core::prover::{
    cc_prove, find_countermodel, verify_derivation_suite, CountermodelOptions, CountermodelOutcome, ProverOptions,
};
use taylor_core::term::{check_trivial, parse_equation_chain, TermBank};
use taylor_core::{Equation, EquationSystem, FiniteAlgebra, Name, TermFn};

use crate::error::{Error, Result};
use crate::formats::{load_algebra, load_relation, load_system, AlgebraFile, RelationFile};
use crate::lab::explore_loop_conjecture;
use crate::pipeline::run_pipeline;
use crate::report::{InputHash, Outcome, RunReport, WallClock};

/// Exit code for unreadable inputs and bad arguments.
pub const USAGE_EXIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "taylor", version, about = "Equational conditions, finite algebras and loop lemmas")]
pub struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a system is satisfied by projections.
    CheckTrivial {
        /// JSON system file or builtin name such as `wnu(3)`.
        system: String,
    },
    /// Decide whether an operation satisfies some Taylor system.
    IsTaylor {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        op: String,
    },
    /// Find a loop in a symmetric relation.
    FindLoop {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Nu)]
        mode: ModeArg,
    },
    /// Synthesize terms.
    #[command(subcommand)]
    Derive(Derive),
    /// Try to derive goal equations from axioms by congruence closure.
    Prove {
        /// JSON system file or builtin name.
        #[arg(long)]
        axioms: String,
        /// JSON system file, builtin name, or an equation `(= lhs rhs)`
        /// over the axioms' symbols.
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Add idempotency of every axiom symbol.
        #[arg(long)]
        idempotent: bool,
        #[arg(long, default_value_t = ProverOptions::default().node_budget)]
        node_budget: usize,
    },
    /// Run the symbolic derivation suite with its idempotency ablation.
    VerifySuite {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Search for a finite algebra satisfying `hyp` but not `goal`.
    Countermodel {
        #[arg(long)]
        hyp: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random candidates per size above 2.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Arity of the candidate operation.
        #[arg(long)]
        op_arity: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Experiments over generated inputs
    #[command(subcommand)]
    Explore(Explore),
}

#[derive(Debug, Subcommand)]
pub enum Derive {
    /// Siggers term from a near unanimity operation.
    Siggers(DeriveArgs),
    /// Double loop term from idempotent operations.
    DoubleLoop(DeriveArgs),
    /// Weak 3-cube term through a strong double loop term.
    #[command(name = "weak-3cube")]
    Weak3Cube(DeriveArgs),
    /// Strong double loop term over a double loop symbol.
    StrongDoubleLoop(SymbolArgs),
    /// `q`, `c` and strong terminator terms over a double loop symbol.
    Terminator(SymbolArgs),
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long)]
    pub algebra: PathBuf,
    /// Operations to use; all of them when omitted.
    #[arg(long)]
    pub op: Vec<String>,
    /// Element cap for closures.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[arg(long, default_value = "d")]
    pub symbol: String,
    /// Also instantiate the terms on this algebra and verify them.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Explore {
    /// Search loopless smooth digraphs of algebraic length one for near
    /// unanimity polymorphisms.
    LoopConjecture {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        /// Sample this many digraphs on `max_vertices` vertices instead of
        /// enumerating all of them.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Search nodes per digraph.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Nu,
    Absorbing,
    Lemma,
}

impl From<ModeArg> for LoopMode {
    fn from(m: ModeArg) -> LoopMode {
        match m {
            ModeArg::Nu => LoopMode::Nu,
            ModeArg::Absorbing => LoopMode::Absorbing,
            ModeArg::Lemma => LoopMode::Lemma,
        }
    }
}

/// Hashes of everything a command read.
#[derive(Default)]
struct Inputs(Vec<InputHash>);

impl Inputs {
    fn file(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.0.push(InputHash::of(&path.display().to_string(), &bytes));
        Ok(())
    }

    fn system(&mut self, arg: &str) -> Result<EquationSystem> {
        let sys = load_system(arg)?;
        if Path::new(arg).exists() {
            self.file(Path::new(arg))?;
        } else {
            self.0.push(InputHash::of(arg, arg.as_bytes()));
        }
        Ok(sys)
    }

    fn algebra(&mut self, path: &Path) -> Result<FiniteAlgebra> {
        let alg = load_algebra(path)?;
        self.file(path)?;
        Ok(alg)
    }
}

struct Verdict {
    outcome: Outcome,
    label: &'static str,
    artifacts: Value,
    seed: Option<u64>,
}

impl Verdict {
    fn new(outcome: Outcome, label: &'static str, artifacts: Value) -> Verdict {
        Verdict {
            outcome,
            label,
            artifacts,
            seed: None,
        }
    }
}

fn binding_json(binding: &[(Name, TermFn)]) -> Value {
    Value::Array(
        binding
            .iter()
            .map(|(s, t)| json!({"symbol": s.to_string(), "term": t.to_string()}))
            .collect(),
    )
}

fn synthesis_json(r: &SynthesisResult) -> Value {
    json!({
        "status": r.status.label(),
        "symbol": r.symbol.to_string(),
        "term": r.term.as_ref().map(ToString::to_string),
        "auxiliary": binding_json(&r.auxiliary),
        "verified": r.verified,
        "stats": {
            "closure_sizes": r.stats.closure_sizes,
            "rounds": r.stats.rounds,
            "states_explored": r.stats.states_explored,
            "elapsed_ms": r.stats.elapsed.as_secs_f64() * 1e3,
        },
    })
}

fn synthesis_outcome(r: &SynthesisResult) -> (Outcome, &'static str) {
    match r.status {
        SynthesisStatus::Found => (Outcome::Success, "found"),
        SynthesisStatus::NotTaylor => (Outcome::Negative, "not_taylor"),
        SynthesisStatus::Inconclusive => (Outcome::Inconclusive, "inconclusive"),
    }
}

fn synthesis_options(cap: usize, clock: &dyn Clock) -> SynthesisOptions<'_> {
    SynthesisOptions {
        closure: ClosureOptions {
            cap,
            ..ClosureOptions::default()
        },
        clock,
    }
}

fn derive(d: &Derive, inputs: &mut Inputs) -> Result<Verdict> {
    let clock = WallClock::start();
    match d {
        Derive::Siggers(a) | Derive::DoubleLoop(a) | Derive::Weak3Cube(a) => {
            let alg = inputs.algebra(&a.algebra)?;
            let options = synthesis_options(a.cap, &clock);
            let ops: Vec<&str> = a.op.iter().map(String::as_str).collect();
            let result = match d {
                Derive::Siggers(_) => {
                    let op = match ops.as_slice() {
                        [op] => op.to_string(),
                        [] if alg.op_names().len() == 1 => alg.op_names()[0].to_string(),
                        _ => return Err(Error::Usage("siggers needs exactly one --op".into())),
                    };
                    siggers_from_nu(&alg, &op, &options)?
                }
                Derive::DoubleLoop(_) => taylor_core::forge::double_loop_from_taylor(&alg, &ops, &options)?,
                _ => {
                    let p = run_pipeline(&alg, &ops, &options)?;
                    match p.stages {
                        Some(s) => s.weak_3cube,
                        None => p.double_loop,
                    }
                }
            };
            let (outcome, label) = synthesis_outcome(&result);
            Ok(Verdict::new(outcome, label, synthesis_json(&result)))
        }
        Derive::StrongDoubleLoop(a) | Derive::Terminator(a) => {
            let scheme = strong_double_loop_from_double_loop(&a.symbol);
            let forbidden = scheme.matrix.first_forbidden();
            let mut artifacts = Map::new();
            if matches!(d, Derive::StrongDoubleLoop(_)) {
                artifacts.insert("term".into(), json!(scheme.term.to_string()));
                artifacts.insert(
                    "columns".into(),
                    json!({
                        "count": scheme.matrix.columns.len(),
                        "slot_counts": scheme.matrix.slot_counts(),
                        "unused_slots": scheme.unused_slots,
                        "first_forbidden": forbidden,
                    }),
                );
            } else {
                let qc = q_and_c_from_strong_double_loop(&a.symbol);
                let t = terminator_from_q(&qc);
                artifacts.insert("q_and_c".into(), binding_json(&qc.binding()));
                artifacts.insert("terminator".into(), binding_json(&t.binding()));
            }
            if let Some(path) = &a.algebra {
                let alg = inputs.algebra(path)?;
                let p = run_pipeline(&alg, &[], &synthesis_options(a.cap, &clock))?;
                let (outcome, label) = synthesis_outcome(&p.double_loop);
                artifacts.insert("double_loop".into(), synthesis_json(&p.double_loop));
                let Some(s) = p.stages else {
                    return Ok(Verdict::new(outcome, label, Value::Object(artifacts)));
                };
                let verified = if matches!(d, Derive::StrongDoubleLoop(_)) {
                    s.strong_verified
                } else {
                    s.q_and_c_verified && s.terminator_verified
                };
                artifacts.insert("verified".into(), json!(verified));
                if !verified {
                    return Ok(Verdict::new(Outcome::Negative, "verification_failed", Value::Object(artifacts)));
                }
            }
            Ok(Verdict::new(Outcome::Success, "found", Value::Object(artifacts)))
        }
    }
}

fn goal_equations(arg: &str, axioms: &EquationSystem, inputs: &mut Inputs) -> Result<Vec<Equation>> {
    if arg.trim_start().starts_with('(') {
        inputs.0.push(InputHash::of("goal", arg.as_bytes()));
        return Ok(parse_equation_chain(arg, &axioms.signature, &mut TermBank::new())?);
    }
    Ok(inputs.system(arg)?.equations)
}

fn lab_json(report: &LabReport) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let c = &e.candidate;
            let (outcome, poly) = match &e.outcome {
                ProbeOutcome::Polymorphism(op) => ("polymorphism", json!(op.table())),
                ProbeOutcome::None => ("none", Value::Null),
                ProbeOutcome::Inconclusive { .. } => ("inconclusive", Value::Null),
                ProbeOutcome::Filtered => ("filtered", Value::Null),
            };
            json!({
                "digraph": RelationFile::from_relation(&c.digraph),
                "classification": {
                    "smooth": c.class.smooth,
                    "algebraic_length_one": c.class.algebraic_length_one,
                    "has_loop": c.class.has_loop,
                },
                "outcome": outcome,
                "polymorphism": poly,
                "elapsed_ms": e.elapsed.as_secs_f64() * 1e3,
            })
        })
        .collect();
    json!({
        "max_vertices": report.max_vertices,
        "arity": report.arity,
        "budget": report.budget,
        "examined": report.examined,
        "filtered": report.filtered,
        "candidates": report.entries.len(),
        "counterexamples": report.counterexamples().count(),
        "inconclusive": report.inconclusive(),
        "entries": entries,
    })
}

fn execute(command: &Command, inputs: &mut Inputs) -> Result<Verdict> {
    match command {
        Command::CheckTrivial { system } => {
            let sys = inputs.system(system)?;
            Ok(match check_trivial(&sys) {
                Some(p) => Verdict::new(
                    Outcome::Success,
                    "trivial",
                    json!({"trivial": true, "projections": p.choice.iter().map(|(s, c)| (s.to_string(), json!(c))).collect::<Map<_, _>>()}),
                ),
                None => Verdict::new(Outcome::Negative, "not_trivial", json!({"trivial": false})),
            })
        }
        Command::IsTaylor { algebra, op } => {
            let alg = inputs.algebra(algebra)?;
            let table = alg.require_op(op)?;
            let report = is_taylor_operation(table)?;
            Ok(match &report.verdict {
                Ok(ts) => Verdict::new(
                    Outcome::Success,
                    "taylor",
                    json!({"taylor": true, "idempotent": report.idempotent, "equations": ts.to_system().equation_texts()}),
                ),
                Err(e) => Verdict::new(
                    Outcome::Negative,
                    "not_taylor",
                    json!({"taylor": false, "idempotent": report.idempotent, "reason": e.to_string()}),
                ),
            })
        }
        Command::FindLoop {
            algebra,
            op,
            relation,
            mode,
        } => {
            let alg = inputs.algebra(algebra)?;
            let table = alg.require_op(op)?;
            let r = load_relation(relation, alg.size())?;
            inputs.file(relation)?;
            let cert = find_loop(&r, table, (*mode).into(), LoopOptions::default())?;
            let frames: Vec<Value> = cert
                .frames
                .iter()
                .map(|f| {
                    json!({
                        "phase": f.phase.label(),
                        "measure": f.measure,
                        "next": f.next,
                        "relation_size": cert.relations[f.relation].len(),
                        "walk_length": f.cycle.len(),
                    })
                })
                .collect();
            Ok(Verdict::new(
                Outcome::Success,
                "loop",
                json!({
                    "loop": cert.pair(),
                    "verified": cert.verify(&r),
                    "measure_decreases": cert.measure_decreases(),
                    "frames": frames,
                }),
            ))
        }
        Command::Derive(d) => derive(d, inputs),
        Command::Prove {
            axioms,
            goal,
            depth,
            idempotent,
            node_budget,
        } => {
            let mut ax = inputs.system(axioms)?;
            if *idempotent {
                ax = ax.with_idempotency();
            }
            let goals = goal_equations(goal, &ax, inputs)?;
            let options = ProverOptions {
                node_budget: *node_budget,
            };
            let mut all = true;
            let results: Vec<Value> = goals
                .iter()
                .map(|g| {
                    let r = cc_prove(&ax, g, *depth, options);
                    all &= r.outcome.is_proved();
                    json!({
                        "goal": taylor_core::term::equation_text(g),
                        "outcome": r.outcome.label(),
                        "nodes": r.nodes,
                        "classes": r.classes,
                        "instantiations": r.instantiations,
                        "merges": r.merges,
                    })
                })
                .collect();
            let (outcome, label) = if all {
                (Outcome::Success, "proved")
            } else {
                (Outcome::Inconclusive, "unknown")
            };
            Ok(Verdict::new(outcome, label, json!({"depth": depth, "goals": results})))
        }
        Command::VerifySuite { depth } => {
            let report = verify_derivation_suite(*depth, ProverOptions::default());
            let entries: Vec<Value> = report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "group": e.goal.group.label(),
                        "goal": e.goal.label,
                        "outcome": e.outcome.label(),
                        "uses_idempotency": e.goal.uses_idempotency,
                        "without_idempotency": e.ablated.label(),
                    })
                })
                .collect();
            let ok = report.all_proved() && report.ablation_matches();
            let (outcome, label) = if ok {
                (Outcome::Success, "proved")
            } else {
                (Outcome::Inconclusive, "unknown")
            };
            Ok(Verdict::new(
                outcome,
                label,
                json!({
                    "depth": depth,
                    "all_proved": report.all_proved(),
                    "ablation_matches": report.ablation_matches(),
                    "entries": entries,
                }),
            ))
        }
        Command::Countermodel {
            hyp,
            goal,
            max_size,
            seed,
            samples,
            op_arity,
            budget,
        } => {
            let h = inputs.system(hyp)?;
            let g = inputs.system(goal)?;
            let options = CountermodelOptions {
                max_size: *max_size,
                op_arity: *op_arity,
                samples: *samples,
                work_budget: *budget,
                seed: *seed,
                ..CountermodelOptions::default()
            };
            let mut v = match find_countermodel(&h, &g, &options)? {
                CountermodelOutcome::Found(c) => Verdict::new(
                    Outcome::Success,
                    "found",
                    json!({
                        "algebra": AlgebraFile::from_algebra(&c.algebra),
                        "hypothesis_binding": binding_json(&c.hypothesis_binding),
                        "goal_assignments": c.goal_assignments,
                    }),
                ),
                CountermodelOutcome::None { examined } => {
                    Verdict::new(Outcome::Negative, "none", json!({"examined": examined}))
                }
                CountermodelOutcome::Inconclusive { examined, undecided } => Verdict::new(
                    Outcome::Inconclusive,
                    "inconclusive",
                    json!({"examined": examined, "undecided": undecided}),
                ),
            };
            v.seed = Some(*seed);
            Ok(v)
        }
        Command::Explore(Explore::LoopConjecture {
            max_vertices,
            arity,
            sample,
            seed,
            budget,
        }) => {
            let mode = match sample {
                Some(count) => LabMode::Sample {
                    count: *count,
                    seed: *seed,
                },
                None => LabMode::Exhaustive,
            };
            let report = explore_loop_conjecture(*max_vertices, *arity, mode, *budget)?;
            let (outcome, label) = if report.counterexamples().next().is_some() {
                (Outcome::Negative, "counterexample")
            } else if report.inconclusive() > 0 {
                (Outcome::Inconclusive, "inconclusive")
            } else {
                (Outcome::Success, "no_counterexample")
            };
            let mut v = Verdict::new(outcome, label, lab_json(&report));
            v.seed = sample.map(|_| *seed);
            Ok(v)
        }
    }
}

fn command_name(c: &Command) -> String {
    let s = match c {
        Command::CheckTrivial { .. } => "check-trivial",
        Command::IsTaylor { .. } => "is-taylor",
        Command::FindLoop { .. } => "find-loop",
        Command::Derive(Derive::Siggers(_)) => "derive siggers",
        Command::Derive(Derive::DoubleLoop(_)) => "derive double-loop",
        Command::Derive(Derive::Weak3Cube(_)) => "derive weak-3cube",
        Command::Derive(Derive::StrongDoubleLoop(_)) => "derive strong-double-loop",
        Command::Derive(Derive::Terminator(_)) => "derive terminator",
        Command::Prove { .. } => "prove",
        Command::VerifySuite { .. } => "verify-suite",
        Command::Countermodel { .. } => "countermodel",
        Command::Explore(Explore::LoopConjecture { .. }) => "explore loop-conjecture",
    };
    s.to_string()
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<RunReport> {
    let clock = WallClock::start();
    let mut inputs = Inputs::default();
    let v = execute(&cli.command, &mut inputs)?;
    Ok(RunReport {
        command: command_name(&cli.command),
        inputs: inputs.0,
        outcome: v.label.to_string(),
        exit_code: v.outcome.exit_code(),
        seed: v.seed,
        artifacts: v.artifacts,
        elapsed_ms: clock.now().as_secs_f64() * 1e3,
    })
}

/// Parses `args`, runs the command and prints the report; returns the
/// exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            report.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            USAGE_EXIT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_arguments_are_usage_errors() {
        assert_eq!(main_with(["taylor", "no-such-command"]), USAGE_EXIT);
        assert_eq!(main_with(["taylor", "check-trivial", "no_such_builtin"]), USAGE_EXIT);
    }
}

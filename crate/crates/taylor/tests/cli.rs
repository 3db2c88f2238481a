mod common;

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use taylor::formats::load_algebra;
use taylor_core::term::{builtin_system, name, parse_term_fn};
use taylor_core::{FiniteAlgebra, Name, Signature, TermFn};

use common::Reference;

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(file)
        .display()
        .to_string()
}

fn taylor(args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_taylor"))
        .args(args)
        .envs(envs.iter().copied())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = taylor(args, &[]);
    let v = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout} {stderr}"));
    (code, v)
}

fn strip_elapsed(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.retain(|k, _| !k.starts_with("elapsed"));
            m.values_mut().for_each(strip_elapsed);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

/// Signature of `alg` plus the given derived symbols.
fn signature(alg: &FiniteAlgebra, extra: &[(&str, usize)]) -> Signature {
    let mut sig = alg.signature();
    for (s, n) in extra {
        sig.declare(s, *n).unwrap();
    }
    sig
}

fn term(v: &Value, sig: &Signature) -> TermFn {
    parse_term_fn(v.as_str().expect("term text"), sig).unwrap()
}

fn binding(v: &Value, sig: &Signature) -> Vec<(Name, TermFn)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|b| (name(b["symbol"].as_str().unwrap()), term(&b["term"], sig)))
        .collect()
}

#[test]
fn check_trivial_exit_codes() {
    let (code, v) = report(&["check-trivial", &data("maltsev.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["artifacts"], serde_json::json!({"trivial": false}));
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let (code, v) = report(&["check-trivial", "idempotency(3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["artifacts"]["projections"]["t"], 1);
}

#[test]
fn derived_terms_reparse_and_verify() {
    for (alg_file, cmd, system) in [
        ("maj.json", "siggers", "siggers6"),
        ("maj.json", "double-loop", "double_loop"),
        ("xor3.json", "double-loop", "double_loop"),
        ("maj.json", "weak-3cube", "weak_3cube"),
        ("xor3.json", "weak-3cube", "weak_3cube"),
    ] {
        let path = data(alg_file);
        let (code, v) = report(&["derive", cmd, "--algebra", &path]);
        assert_eq!(code, 0, "{cmd} on {alg_file}");
        let a = &v["artifacts"];
        assert_eq!(a["status"], "found");
        assert_eq!(a["verified"], true);
        let alg = load_algebra(path.as_ref()).unwrap();
        let aux = binding(&a["auxiliary"], &alg.signature());
        let aux_symbols: Vec<(&str, usize)> = aux.iter().map(|(s, t)| (&**s, t.arity())).collect();
        let t = term(&a["term"], &signature(&alg, &aux_symbols));
        let mut defs = aux.clone();
        defs.push((name(a["symbol"].as_str().unwrap()), t));
        let sys = builtin_system(system, None).unwrap();
        assert!(taylor_core::algebra::satisfies(&alg, &sys, &defs).unwrap(), "{cmd} on {alg_file}");
        assert!(Reference::new(&alg, &defs).holds(&sys), "{cmd} on {alg_file}");
    }
}

#[test]
fn symbolic_terms_instantiate() {
    let path = data("xor3.json");
    let alg = load_algebra(path.as_ref()).unwrap();
    let (code, v) = report(&["derive", "strong-double-loop", "--symbol", "e", "--algebra", &path]);
    assert_eq!(code, 0);
    let a = &v["artifacts"];
    assert_eq!(a["verified"], true);
    assert_eq!(a["columns"]["first_forbidden"], Value::Null);
    let dl = term(&a["double_loop"]["term"], &alg.signature());
    let strong = term(&a["term"], &signature(&alg, &[("e", 12)])).inline("e", &dl);
    let sys = builtin_system("strong_double_loop", None).unwrap();
    assert!(Reference::new(&alg, &[(name("d"), strong.clone())]).holds(&sys));

    let (code, v) = report(&["derive", "terminator", "--algebra", &path]);
    assert_eq!(code, 0);
    let a = &v["artifacts"];
    assert_eq!(a["verified"], true);
    let sig = signature(&alg, &[("d", 12)]);
    let inline = |b: Vec<(Name, TermFn)>| -> Vec<(Name, TermFn)> {
        b.into_iter().map(|(s, t)| (s, t.inline("d", &strong))).collect()
    };
    let qc = inline(binding(&a["q_and_c"], &sig));
    assert!(Reference::new(&alg, &qc).holds(&builtin_system("q_and_c", None).unwrap()));
    let t = inline(binding(&a["terminator"], &sig));
    assert!(Reference::new(&alg, &t).holds(&builtin_system("strong_terminator", None).unwrap()));
}

#[test]
fn negative_and_inconclusive_exits() {
    let (code, v) = report(&["derive", "double-loop", "--algebra", &data("proj3.json")]);
    assert_eq!((code, v["outcome"].as_str()), (1, Some("not_taylor")));
    let (code, _) = report(&["derive", "double-loop", "--algebra", &data("xor3.json"), "--cap", "12"]);
    assert_eq!(code, 2);
    let (code, v) = report(&["countermodel", "--hyp", "maltsev", "--goal", "wnu(3)"]);
    assert_eq!((code, v["outcome"].as_str()), (1, Some("none")));
    let (code, _) = report(&["prove", "--axioms", "maltsev", "--goal", "(= (m x y z) x)"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_3() {
    let (code, _, stderr) = taylor(&["derive"], &[]);
    assert_eq!(code, 3, "{stderr}");
    let (code, _, _) = taylor(&["check-trivial", "no_such_system"], &[]);
    assert_eq!(code, 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"size\": 2,\n \"ops\": {\"f\": {\"arity\": 2 \"table\": []}}}").unwrap();
    let (code, _, stderr) = taylor(&["is-taylor", "--algebra", bad.to_str().unwrap(), "--op", "f"], &[]);
    assert_eq!(code, 3);
    assert!(stderr.contains("bad.json:2:"), "{stderr}");
    let sys = dir.path().join("sys.json");
    std::fs::write(&sys, r#"{"symbols":{"f":2},"equations":["(= (f x) x)"]}"#).unwrap();
    let (code, _, stderr) = taylor(&["check-trivial", sys.to_str().unwrap()], &[]);
    assert_eq!(code, 3);
    assert!(stderr.contains("equation 0") && stderr.contains("byte 3"), "{stderr}");
}

#[test]
fn loop_commands() {
    let (code, v) = report(&["explore", "loop-conjecture", "--max-vertices", "3", "--arity", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["artifacts"]["counterexamples"], 0);
    let (code, v) = report(&[
        "find-loop",
        "--algebra",
        &data("median3.json"),
        "--op",
        "m",
        "--relation",
        &data("triangle.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["artifacts"]["verified"], true);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn replays_are_identical() {
    let runs = [
        vec!["countermodel", "--hyp", "maltsev", "--goal", "nu(3)", "--max-size", "3", "--seed", "5", "--samples", "20"],
        vec!["explore", "loop-conjecture", "--max-vertices", "4", "--sample", "50", "--seed", "9"],
    ];
    for args in runs {
        let (_, mut a) = report(&args);
        let (_, stdout, _) = taylor(&args, &[("TAYLOR_THREADS", "2")]);
        let mut b: Value = serde_json::from_str(&stdout).unwrap();
        strip_elapsed(&mut a);
        strip_elapsed(&mut b);
        assert_eq!(a, b, "{args:?}");
        assert!(a["seed"].is_u64());
    }
}

#[test]
fn text_format() {
    let (code, stdout, _) = taylor(&["--format", "text", "verify-suite"], &[]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("verify-suite: proved (exit 0)"), "{stdout}");
}

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use taylor_core::clock::Clock;

/// Wall clock measured from its creation.
#[derive(Clone, Copy, Debug)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> WallClock {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn now(&self) -> Duration {
        self.0.elapsed()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputHash {
    pub name: String,
    pub sha256: String,
}

impl InputHash {
    pub fn of(name: &str, bytes: &[u8]) -> InputHash {
        let digest = Sha256::digest(bytes);
        let mut sha256 = String::with_capacity(64);
        for b in digest.iter() {
            write!(sha256, "{b:02x}").expect("writing to a string");
        }
        InputHash {
            name: name.to_string(),
            sha256,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Negative,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Negative => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

/// What a command prints on standard output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputHash>,
    /// Short verdict, such as `not_trivial` or `found`.
    pub outcome: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub artifacts: Value,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report without its timing; equal inputs and seed give equal bytes.
    pub fn replay_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0.0;
        strip_timings(&mut r.artifacts);
        serde_json::to_string(&r).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {} (exit {})\n", self.command, self.outcome, self.exit_code);
        if let Some(s) = self.seed {
            writeln!(out, "seed: {s}").unwrap();
        }
        if let Value::Object(map) = &self.artifacts {
            for (k, v) in map {
                match v {
                    Value::String(s) => writeln!(out, "{k}: {s}").unwrap(),
                    Value::Array(items) if items.len() > 8 => writeln!(out, "{k}: {} entries", items.len()).unwrap(),
                    v => writeln!(out, "{k}: {v}").unwrap(),
                }
            }
        }
        writeln!(out, "elapsed: {:.1} ms", self.elapsed_ms).unwrap();
        out
    }
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !k.starts_with("elapsed"));
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            InputHash::of("e", b"").sha256,
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn replay_ignores_timings() {
        let mut r = RunReport {
            command: "c".into(),
            inputs: vec![],
            outcome: "found".into(),
            exit_code: 0,
            seed: Some(1),
            artifacts: json!({"entries": [{"elapsed_ms": 3.0, "v": 1}]}),
            elapsed_ms: 12.0,
        };
        let a = r.replay_json();
        r.elapsed_ms = 40.0;
        r.artifacts["entries"][0]["elapsed_ms"] = json!(9.0);
        assert_eq!(a, r.replay_json());
        assert!(!a.contains("elapsed_ms\":3"));
    }
}

//! JSON files for equation systems, finite algebras and relations.
//!
//! ```json
//! {"symbols":{"t":6},"equations":["(= (t x y y y x x) (t y x y x y x))"]}
//! {"size":2,"ops":{"maj":{"arity":3,"table":[0,0,0,1,0,1,1,1]}}}
//! {"power":2,"tuples":[[0,1],[1,0]]}
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use taylor_core::term::{parse_builtin, parse_equation_chain, TermBank};
use taylor_core::{Elem, EquationSystem, FiniteAlgebra, OperationTable, Relation, Signature};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub symbols: BTreeMap<String, usize>,
    pub equations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpFile {
    pub arity: usize,
    pub table: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub size: usize,
    pub ops: BTreeMap<String, OpFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    /// Universe size; when absent it is taken from context.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub power: usize,
    pub tuples: Vec<Vec<Elem>>,
}

impl SystemFile {
    pub fn from_system(sys: &EquationSystem) -> SystemFile {
        SystemFile {
            symbols: sys.signature.iter().map(|(s, n)| (s.to_string(), n)).collect(),
            equations: sys.equation_texts(),
        }
    }

    pub fn to_system(&self, path: &Path) -> Result<EquationSystem> {
        let mut sig = Signature::new();
        for (s, &n) in &self.symbols {
            sig.declare(s, n).map_err(|source| invalid(path, source))?;
        }
        let mut bank = TermBank::new();
        let mut equations = Vec::new();
        for (index, text) in self.equations.iter().enumerate() {
            let chain = parse_equation_chain(text, &sig, &mut bank).map_err(|source| Error::Equation {
                path: path.to_path_buf(),
                index,
                source,
            })?;
            equations.extend(chain);
        }
        EquationSystem::new(sig, equations).map_err(|source| invalid(path, source))
    }
}

impl AlgebraFile {
    pub fn from_algebra(alg: &FiniteAlgebra) -> AlgebraFile {
        AlgebraFile {
            size: alg.size(),
            ops: alg
                .ops()
                .map(|(s, t)| {
                    let op = OpFile {
                        arity: t.arity(),
                        table: t.table().to_vec(),
                    };
                    (s.to_string(), op)
                })
                .collect(),
        }
    }

    pub fn to_algebra(&self, path: &Path) -> Result<FiniteAlgebra> {
        let mut alg = FiniteAlgebra::new(self.size).map_err(|e| invalid(path, e))?;
        for (s, op) in &self.ops {
            let table = OperationTable::new(self.size, op.arity, op.table.clone())
                .map_err(|e| invalid(path, format_args!("operation `{s}`: {e}")))?;
            alg.add_op(s, table).map_err(|e| invalid(path, e))?;
        }
        Ok(alg)
    }
}

impl RelationFile {
    pub fn from_relation(r: &Relation) -> RelationFile {
        RelationFile {
            size: Some(r.size()),
            power: r.power(),
            tuples: r.tuples(),
        }
    }

    /// `size` is used when the file does not fix one; it must agree otherwise.
    pub fn to_relation(&self, path: &Path, size: usize) -> Result<Relation> {
        if let Some(s) = self.size.filter(|&s| s != size) {
            return Err(invalid(path, format_args!("relation on {s} elements, expected {size}")));
        }
        Relation::from_tuples(size, self.power, &self.tuples).map_err(|e| invalid(path, e))
    }
}

fn invalid(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Invalid {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// A system given as a JSON file, or else as a builtin name such as
/// `maltsev` or `wnu(3)`.
pub fn load_system(arg: &str) -> Result<EquationSystem> {
    let path = PathBuf::from(arg);
    if path.exists() || arg.ends_with(".json") {
        return read_json::<SystemFile>(&path)?.to_system(&path);
    }
    Ok(parse_builtin(arg)?)
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    read_json::<AlgebraFile>(path)?.to_algebra(path)
}

pub fn load_relation(path: &Path, size: usize) -> Result<Relation> {
    read_json::<RelationFile>(path)?.to_relation(path, size)
}

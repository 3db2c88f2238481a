use std::path::PathBuf;

use taylor_core::algebra::AlgebraError;
use taylor_core::forge::ForgeError;
use taylor_core::loops::LoopError;
use taylor_core::term::TermError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: equation {index}: {source}", path.display())]
    Equation {
        path: PathBuf,
        index: usize,
        #[source]
        source: TermError,
    },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

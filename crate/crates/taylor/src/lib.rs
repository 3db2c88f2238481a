//! File formats, reports and the command line around `taylor-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod lab;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};

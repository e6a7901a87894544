//! File format, built-in corpus, reports and command dispatch for the
//! `skeleta` tool.

pub mod corpus;
pub mod document;
pub mod report;
pub mod run;

pub use corpus::{corpus, CorpusError, CorpusSpec};
pub use document::{parse_model, parse_model_unchecked, DocumentError, ModelDocument};
pub use report::{OutputFormat, Report};
pub use run::{run, Command, RunError, Subset};

//! Command-line front end: the document format, the shipped corpus, the
//! subcommands and the deterministic law report.

pub mod commands;
pub mod corpus;
pub mod doc;
pub mod laws;

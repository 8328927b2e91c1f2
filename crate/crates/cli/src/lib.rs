//! Library side of the `formality` command: presentation documents, reports,
//! subcommand bodies and the certificate re-checker.

pub mod commands;
pub mod corpus;
pub mod doc;
pub mod report;
pub mod verify;

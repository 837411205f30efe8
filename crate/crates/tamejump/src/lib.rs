//! Command-line front end, JSON formats, the example corpus and the oracle
//! grid runner built on `tamejump-core`.

pub mod cli;
pub mod corpus;
pub mod dto;
pub mod error;
pub mod oracle;
pub mod render;

pub use error::CliError;

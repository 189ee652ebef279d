//! Example corpus, matrix builders and the command-line front end.

pub mod builders;
pub mod cli;
pub mod corpus;

pub use cli::cli_main;
pub use corpus::{builtin_corpus, fixture, run_fixture, Fixture, FixtureReport};

//! Workspace language, command driver and replay harness for `spcalc-core`.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod cli;
pub mod gen;
pub mod jobs;
pub mod printer;
pub mod record;
pub mod replay;
pub mod suites;
pub mod workspace;

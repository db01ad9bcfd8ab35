//! Runtime pieces around `sted-core`: an on-disk embedding cache, an HTTP
//! embedding provider, corpus files, variation sweeps and the `sted`
//! command-line tool.

pub mod cache;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod remote;
pub mod sweep;

pub use error::{Error, Result};

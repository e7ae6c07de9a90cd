//! CLI and HTTP session API over the `clarisql` core.

pub mod api;
pub mod cli;
pub mod config;

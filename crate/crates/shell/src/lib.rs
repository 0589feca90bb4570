//! Command-line front end and live session server.

pub mod cli;
pub mod config;
pub mod protocol;
pub mod server;
pub mod session;

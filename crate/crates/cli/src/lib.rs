//! Library side of the `sinspell` command: configuration, the check report
//! and the interactive review engine.

pub mod config;
pub mod interactive;
pub mod report;

pub use config::{Config, Resources};
pub use interactive::{run_session, SessionEnd};
pub use report::{find_flags, render, Candidate, Flag};

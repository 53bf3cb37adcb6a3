//! Harness around `laocoon-core`: config and scenario files, whole-election
//! runs, board verification, a brute-force recount, and the cost benchmark.

pub mod bench;
pub mod config;
pub mod oracle;
pub mod runner;
pub mod scenario;
pub mod verify;

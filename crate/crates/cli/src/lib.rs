//! Sweep orchestration, claim tracing and report persistence behind the
//! `ixlab` binary.

pub mod grid;
pub mod output;
pub mod sweep;
pub mod trace;

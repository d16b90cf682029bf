//! Std companion to `dicke-core`: the full-Hilbert-space oracle, experiment
//! runners, file output and the `dicke` command-line interface.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod experiment;
pub mod oracle;
pub mod output;
pub mod properties;

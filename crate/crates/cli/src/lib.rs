//! Support code for the `compressim` binary.

pub mod builtins;
pub mod commands;

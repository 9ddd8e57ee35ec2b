//! File formats shared between the command-line binary and its tests.

pub mod format;

//! Host-side companion to `mdlab-core`: file formats, a thread-pooled
//! experiment runner and the `mdlab` command line.

pub mod cli;
pub mod format;
pub mod mlist;
pub mod runner;

//! Batch front end for the logflat library: problem files in, deterministic reports out.

pub mod gallery;
pub mod problem;
pub mod report;
pub mod tasks;
pub mod workspace;

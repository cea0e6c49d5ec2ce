//! Configuration, reporting and sweep machinery for the `alghyp` binary.

pub mod atlas;
pub mod config;
pub mod report;

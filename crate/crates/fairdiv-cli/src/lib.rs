//! Command-line companion to `fairdiv-core`: file formats, structured
//! reports, and the benchmark harness. The binary lives in `main.rs`;
//! everything here is library code so integration tests can call it
//! directly.

pub mod bench;
pub mod format;
pub mod report;

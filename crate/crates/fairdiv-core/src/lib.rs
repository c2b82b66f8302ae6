//! Exact-arithmetic engine for fair division of indivisible goods.
//!
//! The crate is `no_std` (with `alloc`): every operation is a pure function
//! over immutable data, all arithmetic is exact rational arithmetic, and
//! every run is deterministic. IO, file formats and the CLI live in the
//! companion `fairdiv-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod allocators;
pub mod checkers;
pub mod generators;
pub mod model;
pub mod oracle;
pub mod rational;

pub use model::{Allocation, ModelError, Scenario, ScenarioClass};
pub use rational::Rational;

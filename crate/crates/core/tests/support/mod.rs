//! Shared helpers for the integration tests: the bundled catalog, independent
//! oracles, and seeded random structures.
#![allow(dead_code)]

pub mod catalog;
pub mod oracles;
pub mod random;

//! G-crossed braided fusion category calculator.
//!
//! Skeletal category data, consistency checks, fusion-tree bases, braid
//! group representations, a diagram evaluator and gate protocols built on
//! symmetry defects.

pub mod braids;
pub mod catdata;
pub mod consistency;
pub mod diagrams;
pub mod cli;
pub mod error;
pub mod fusion;
pub mod numerics;
pub mod protocols;
pub mod trees;

pub use error::{Error, Result};

//! Attractor lattices of parametrized scalar flows, their continuation sheaves
//! over a one-dimensional parameter space, and GF(2) sheaf cohomology.

// `!(a < b)` is used on purpose so NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod gf2;
pub mod lattice;
pub mod report;
pub mod rings;
pub mod sheaf;

pub use error::{Error, Result};
pub use exec::Execution;

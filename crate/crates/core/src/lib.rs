//! Dimer coverings of rail-yard graphs.
//!
//! The crate covers exact partition functions and sampling through the
//! Schur-process (vertex operator) description, and the asymptotic
//! analytics: moments and densities of limiting column measures, and
//! frozen-boundary curves for staircase and piecewise left boundaries.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the companion `railyard-cli` crate.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(a < b)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod fock;
pub mod frozenboundary;
pub mod limitshape;
pub mod partitions;
pub mod piecewise;
pub mod poly;
pub mod railyard;
pub mod sampler;
pub mod schur_process;
pub mod symfunc;

pub use error::Error;
pub use partitions::Partition;
pub use railyard::{Letter, RailYardSpec, Sign, Slot};

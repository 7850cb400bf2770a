//! Finite-window constructions around free sets of fixed-point-free
//! functions, together with brute-force oracles that check them.
//!
//! Every infinite object is replaced by its restriction to a window
//! `[0, N)`. A [`FiniteFunction`] may send points past `N`; such boundary
//! edges carry no obligations.

pub mod boundedfam;
pub mod error;
pub mod freesets;
pub mod funcgraph;
pub mod involutions;
pub mod partitions;
pub mod ratio;
pub mod rng;
pub mod rosenthal;

pub use error::{Error, Result};
pub use funcgraph::{FiniteFunction, SubsetOfWindow};

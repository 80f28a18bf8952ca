//! Finite Δ-groupoids, the universal rings they generate, and combinatorial
//! models of topological pairs from which Δ-groupoids are computed.
//!
//! Everything here is finite and table-driven, so every axiom is checked by
//! exhaustive enumeration.

pub mod constructions;
pub mod delta;
pub mod error;
pub mod finite_ring;
pub mod groupoid;
pub mod homs;
pub mod presented;
pub mod report;
pub mod topo;
mod union_find;

pub use error::{Error, Result};

//! Line consistency of signed graphs.
//!
//! A signed graph is *line consistent* when its naturally vertex-signed line
//! graph has a positive vertex-sign product on every circle. This crate
//! decides that property from local data (balance plus degree conditions at
//! each vertex), builds line-consistent graphs by subdivision constructions,
//! recovers the unique construction data of a graph, and carries the
//! brute-force circle oracles used to cross-check all of it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line live in the `sgline` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod balance;
pub mod constructions;
mod error;
pub mod graph;
pub mod linegraph;
pub mod properties;
pub mod random;
pub mod recovery;
pub mod structure;

pub use error::Error;
pub use graph::{Edge, EdgeId, Graph, PathElement, PathKind, Sign, SignedGraph, VertexSignedGraph};

pub type Result<T, E = Error> = core::result::Result<T, E>;

//! Disjoint shortest paths with congestion on weighted DAGs.

pub mod cli;
pub mod edge;
pub mod error;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod transform;

pub use error::{Error, Result};

#![no_std]

extern crate alloc;

pub mod cluster;
pub mod density;
pub mod error;
pub mod fo;
pub mod generators;
pub mod graph;
pub mod lenzen;
pub mod minor;
pub mod oracle;
pub mod ptas;
mod planarity;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{Graph, Rational, VertexId, VertexSet};

//! Packing colorings of random cubic graphs.
//!
//! * [`graph`]: multigraphs, distances, girth, balls and graph powers.
//! * [`configmodel`]: the configuration model and girth-conditioned sampling.
//! * [`independence`]: i-independence numbers and the joint `c_{1,2,4}`.
//! * [`packing`]: packing colorings and the packing chromatic number.
//! * [`bounds`]: rate functions, density constants and the budget certificate.
//! * [`harness`]: the `pcnlab` command line.

pub mod bitset;
pub mod bounds;
pub mod configmodel;
pub mod graph;
pub mod harness;
pub mod independence;
pub mod packing;
pub mod rng;

pub use graph::{Girth, GraphError, MultiGraph, Vertex};

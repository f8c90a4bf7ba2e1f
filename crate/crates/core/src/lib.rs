//! Finite 3-graphs and the combinatorial tools for studying their uniform
//! Turán density: shadows, links, codegrees, blow-ups and tensor products,
//! vertex orderings, the two vanishing-density criteria, layered functions,
//! linearization, random constructions and subgraph embedding.

pub mod constructions;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod format;
pub mod hypergraph;
pub mod layered;
pub mod named;
pub mod orderings;
pub mod reproduce;
pub mod rng;
mod sat;
mod search;
pub mod uniform;

pub use error::{Error, Result};
pub use hypergraph::{Caps, Edge, Graph, PartPattern, ThreeGraph, Vertex};
pub use orderings::{Labeling, SubsetLabeling};
pub use search::{SearchOutcome, SearchStats, DEFAULT_BUDGET};

//! Feedback arc sets, directed surplus and directional discrepancy of oriented
//! graphs: exact oracles for small inputs, randomized greedy and biased-pair
//! algorithms, quasirandomness diagnostics and extremal constructions.

pub mod cli;
pub mod constructions;
pub mod discrepancy;
pub mod edgelist;
pub mod exact;
pub mod experiment;
pub mod graph;
pub mod greedy;
pub mod half;
pub mod quasirandom;
pub mod rng;
pub mod subgraph;

pub use graph::{Digraph, FasResult, UndirectedGraph, VertexOrdering};
pub use half::HalfInt;

//! Distance spectral radius, spanning-tree packing and P(k,d) certificates.
//!
//! The crate is organised around five areas:
//!
//! - [`graph`]: immutable simple graphs, named families, join / union /
//!   edge deletion, structural classification and the edge-list / graph6
//!   text formats.
//! - [`distance`]: all-pairs shortest paths, the Wiener index, a certified
//!   interval for the Perron root of the distance matrix, and the exact
//!   degree and edge-count bounds that follow from it.
//! - [`extremal`]: the two extremal families `K_{k-1} ∨ (K_{n-k} ∪ K_1)` and
//!   `K_{n/2,n/2} ∖ E(K_{1,n/2-k+1})`, with an exact quotient-matrix route to
//!   their distance spectral radius.
//! - [`packing`]: partitions, exact fractional packing number, matroid-union
//!   tree packing and the P(k,d) verifier.
//! - [`harness`]: instance generators, verification campaigns and reports.

pub mod distance;
pub mod extremal;
pub mod graph;
pub mod harness;
pub mod packing;
pub mod rational;
mod union_find;

pub use distance::{apsp, rho_d, DistanceMatrix, SpectralEstimate};
pub use graph::{Graph, GraphProfile};
pub use rational::Rational;

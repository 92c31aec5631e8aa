//! Exact search for the largest diameter-to-order ratio of layered graphs
//! with a given minimum degree, under a clique-number or chromatic-number
//! constraint.

pub mod builder;
pub mod canon;
pub mod clump;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod layered;
pub mod oracle;
pub mod rational;
pub mod search_chi;
pub mod search_omega;

pub use canon::{canonical_key, CanonicalKey};
pub use clump::{ClumpMatrix, ColorPermutation, MatrixMode};
pub use error::{Error, Result};
pub use graph::{Graph, SmallGraph};
pub use layered::{bfs_layers, diameter, layered_isomorphic, LayeredGraph, TwoLayerGraph};
pub use rational::RatioFraction;

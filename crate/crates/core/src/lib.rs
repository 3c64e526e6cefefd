//! Exact computation kernels for generalized Turán problems with several
//! counted subgraphs, plain and edge-colored.

pub mod berge;
pub mod cache;
pub mod canon;
pub mod coloring;
pub mod colorsearch;
pub mod constructions;
pub mod counting;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod oracle;
pub mod pattern;
pub mod search;
pub mod symmetrize;
pub mod verify;

pub use canon::{automorphism_count, canonical_code, canonicalize, is_isomorphic, CanonicalCode};
pub use embed::contains_subgraph;
pub use error::{Error, Result};
pub use graph::SmallGraph;
pub use pattern::PatternSpec;

//! Palette colorability, constructions, and uniform density audits for
//! 3-uniform hypergraphs.
//!
//! The crate revolves around one predicate: a hypergraph is colorable by a
//! palette (a set of ordered color triples) when some vertex ordering and
//! some coloring of vertex pairs put every edge's ordered color triple into
//! the palette. Around it sit the random palette construction, affine-space
//! line hypergraphs and greedy linear hypergraphs with their fan expansions
//! and witness colorings, partitioned hosts with triad densities and the
//! skeleton/embedding pipeline, and exact-rational density audits.

pub mod audit;
pub mod bitset;
pub mod certificate;
pub mod colorability;
pub mod constructions;
pub mod error;
pub mod hypergraph;
pub mod palette;
pub mod partitioned;
pub mod rational;
pub mod rng;

pub use certificate::ColoringCertificate;
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use palette::Palette;
pub use partitioned::PartitionedHypergraph;
pub use rational::Rat;
pub use rng::SplitMix64;

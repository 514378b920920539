//! Relation-level structural analysis for multi-relational knowledge graphs.
//!
//! The crate parses edge lists into a [`graph::KnowledgeGraph`], trains
//! translational embeddings, and runs a set of relation-centric studies on
//! top of them: similarity-list validation of the embeddings, three
//! relation-similarity views, k-means substructure mining within single
//! relations, and a relation/negation pair probe with cross-validated
//! classifiers. [`pipeline`] strings the stages together into a
//! reproducible report bundle.

pub mod embedding;
pub mod error;
pub mod graph;
pub mod negation;
pub mod numeric;
pub mod pipeline;
pub mod relsim;
pub mod substructure;
pub mod synthetic;

pub use error::{Error, Result};

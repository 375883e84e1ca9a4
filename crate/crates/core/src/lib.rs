//! Discriminative subgraph feature mining for datasets of uncertain graphs.
//!
//! An uncertain graph assigns every edge an independent existence
//! probability over a node set shared by the whole dataset. Because nodes
//! are uniquely labeled, a subgraph feature is simply a connected edge set
//! and containment is edge-set inclusion.
//!
//! The crate computes, for any candidate subgraph, the exact distribution of
//! a discrimination score over all possible worlds of the dataset (without
//! enumerating them), summarizes it with one of four statistical measures,
//! and searches the space of connected subgraphs with branch-and-bound
//! pruning to find the top-t features.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, threading and
//! the command line live in the `ugmine` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod distribution;
pub mod error;
pub mod eval;
pub mod graph;
pub mod miner;
pub mod oracle;
pub mod score;
pub mod search;
pub mod synth;

pub use distribution::{JointSupportDistribution, MeasureKind, MeasureSpec, ScoreDistribution, SupportDistribution};
pub use error::{Error, Result};
pub use graph::{CertainGraph, Dataset, Edge, Label, NodeId, Subgraph, UncertainGraph};
pub use miner::{CandidatePool, MinedFeature, MiningConfig, MiningOutcome, MiningStats, Pruning};
pub use score::{ExtendedScore, ScoreFunctionSpec, ScoreKind, ScoreTable};

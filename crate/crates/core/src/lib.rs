//! Witness-tree enumeration and randomized generation of k-interval pairwise
//! compatibility graphs (k-IPCGs).
//!
//! A graph is a k-IPCG when its vertices can be placed on the leaves of an
//! edge-weighted tree so that two vertices are adjacent exactly when their
//! leaf distance falls into one of k disjoint intervals. This crate holds the
//! pure algorithmic parts:
//!
//! - [`graph`]: bitset graphs and edge-count partitions
//! - [`canon`]: canonical labeling of vertex-colored graphs
//! - [`trees`]: full binary and unrooted binary tree enumeration
//! - [`weights`]: weighted trees, leaf distances and binarization
//! - [`certificate`]: witness records
//! - [`sweep`]: the randomized weight / interval sweep generator
//! - [`verify`]: independent certificate checking
//!
//! File formats, the campaign driver and the CLI live in the `ipcg` crate.

#![no_std]

extern crate alloc;

pub mod canon;
pub mod catalog;
pub mod certificate;
pub mod graph;
pub mod sweep;
pub mod trees;
pub mod verify;
pub mod weights;

pub use canon::{canonical_form, canonical_graph, gen_can, hash_of, is_isomorphic, CanonicalForm, HashValue};
pub use graph::{partition_by_edges, EdgePartition, LabeledGraph, VertexColoring};

//! Chip-firing dynamics on finite connected graphs, with a focus on
//! *self-reachable* configurations: placements that can return to themselves
//! through a nonempty sequence of legal fires.
//!
//! A vertex holding at least as many chips as its degree may *fire*, sending
//! one chip along each incident edge. The crate provides:
//!
//! - [`graph::Graph`] and [`graph::Tree`] with a plain text format,
//!   subtree enumeration, and uniform random tree generation;
//! - [`firing`]: configurations, firing sequences, and their application,
//!   both step-checked and as a Laplacian linear form;
//! - [`selfreach`]: deciders for self-reachability (a linear-time
//!   subtree-deficiency scan on trees, a greedy permutation search on any
//!   connected graph), reachable-set search, and explicit firing-sequence
//!   witnesses between equal-total self-reachable configurations on trees;
//! - [`enumeration`]: exhaustive enumeration and a closed recurrence for the
//!   number of self-reachable configurations on an n-vertex tree — the count
//!   depends only on n and the chip total, never on the tree's shape;
//! - [`verify`]: the exhaustive and randomized suites behind
//!   `chipfire verify`.
//!
//! The `chipfire` binary exposes all of it on the command line.

pub mod catalog;
pub mod cli;
pub mod enumeration;
mod error;
pub mod firing;
pub mod graph;
pub mod selfreach;
pub mod verify;

pub use error::{Error, Result};

/// Default cap on tree size (vertices) for the exhaustive subtree scan,
/// whose subset count grows exponentially.
pub const DEFAULT_SUBTREE_GUARD: usize = 20;

/// Default cap on distinct states explored by reachable-set search.
pub const DEFAULT_STATE_GUARD: u64 = 2_000_000;

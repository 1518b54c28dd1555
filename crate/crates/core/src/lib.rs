//! Workbench for zero-sum infinite-duration games on edge-colored graphs.
//!
//! The crate models finite arenas with edges colored from a finite alphabet,
//! chromatic memory skeletons (DFAs over colors), positional / chromatic /
//! counter strategies, payoff functions with one-player optimum oracles,
//! equilibrium verification, and a constructive engine that lifts one-player
//! equilibria to two-player equilibria.

pub mod arena;
pub mod equilibrium;
pub mod graph;
pub mod lifting;
pub mod memory;
pub mod parity;
pub mod payoffs;
pub mod probes;
pub mod product;

pub use arena::{Arena, Edge, Lasso, NodeId, EdgeId, OnePlayer, Player};
pub use memory::{ChromaticStrategy, GeneralCounterStrategy, MemorySkeleton, PositionalStrategy, Strategy};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arena: {0}")]
    InvalidArena(arena::ValidationReport),
    #[error("edges do not chain into a path (at edge position {0})")]
    NotAPath(usize),
    #[error("unknown color {0:?}")]
    UnknownColor(String),
    #[error("color {0:?} is not an integer weight")]
    NonNumericColor(String),
    #[error("letter {0:?} is outside the payoff's alphabet")]
    BadLetter(String),
    #[error("arena is not one-player with the required side unconstrained")]
    NotOnePlayer,
    #[error("malformed strategy: {0}")]
    BadStrategy(String),
    #[error("one-player oracle returned a non-equilibrium on a {nodes}-node arena")]
    OracleFailure {
        nodes: usize,
        /// The offending arena, serialized for inspection.
        arena: serde_json::Value,
    },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

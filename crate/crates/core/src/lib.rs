//! Simulator and verification lab for small-gap multi-proof quantum Merlin-Arthur
//! protocols on succinctly encoded 3-coloring instances.

pub mod bellqma;
pub mod conflict;
pub mod corpus;
pub mod error;
pub mod gadget;
pub mod graph;
pub mod optimizer;
pub mod provers;
pub mod qma2;
pub mod state;
pub mod suite;

pub use error::{Error, ParseErrorKind, Result};

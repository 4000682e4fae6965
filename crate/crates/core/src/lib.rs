//! Exact simulation of real-time probabilistic and quantum finite automata,
//! with restart and postselection variants and the constructions relating
//! them.

pub mod error;
pub mod fixtures;
pub mod models;
pub mod montecarlo;
pub mod numkit;
pub mod semantics;
pub mod transforms;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};

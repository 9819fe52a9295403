//! Finite localities, their fusion systems, and the expansion of object sets.

pub mod bits;
pub mod classify;
pub mod cli;
pub mod error;
pub mod expansion;
pub mod extend;
pub mod fixtures;
pub mod fusion;
pub mod group;
pub mod io;
pub mod lattice;
pub mod local;
pub mod locality;
pub mod normal;
pub mod partial;
pub mod proper;
pub mod quotient;
pub mod report;
pub mod saturation;
pub mod strat;
pub mod verify;

pub use error::{Error, Result};

/// Marker for an undefined product or a point outside a partial map.
pub const NONE: u32 = u32::MAX;

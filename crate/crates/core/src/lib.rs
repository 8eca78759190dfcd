//! Module categories over the fusion categories C(sl_N, k).

pub mod alcove;
pub mod arith;
pub mod branching;
pub mod classify;
pub mod cosets;
pub mod invariants;
pub mod pointed;
pub mod error;

pub use alcove::{AlcoveIndex, LevelRank, Weight};
pub use error::{Error, Result};

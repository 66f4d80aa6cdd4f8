//! Staircase Koenigs domains and the slopes of parabolic semigroup trajectories.
//!
//! The crate builds truncated staircase polygons, computes normalized Riemann
//! maps of the disk onto them, follows semigroup trajectories `g^{-1}(g(z) + t)`
//! and searches for staircases whose trajectory slope oscillates.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conformal;
pub mod construct;
pub mod dynamics;
pub mod error;
pub mod staircase;

pub use error::{Error, Result};

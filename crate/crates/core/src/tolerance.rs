//! Numerical tolerances shared by every module.
//!
//! The closed forms in this crate are exact; floating point is the only
//! source of error. One [`Tolerance`] value is threaded through anything that
//! has to make a discrete decision from floating data (is this map the
//! identity, are these two points equal, is this weight a multiple of 2π).

use serde::{Deserialize, Serialize};

/// Chordal distance below which two sphere points are considered equal.
pub const CHORDAL: f64 = 1e-9;

/// Relative tolerance for algebraic identities on unit-determinant matrices.
pub const ALGEBRAIC: f64 = 1e-12;

/// Tolerance for knife-edge tests on weights given in radians
/// (is the total weight 2πn, is the constant c zero).
pub const KNIFE_EDGE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub chordal: f64,
    pub algebraic: f64,
    pub knife_edge: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            chordal: CHORDAL,
            algebraic: ALGEBRAIC,
            knife_edge: KNIFE_EDGE,
        }
    }
}

impl Tolerance {
    /// A tolerance with every component set from one user-supplied epsilon,
    /// keeping the algebraic one three orders tighter.
    pub fn uniform(eps: f64) -> Self {
        Self {
            chordal: eps,
            algebraic: (eps * 1e-3).max(f64::EPSILON * 16.0),
            knife_edge: eps,
        }
    }
}

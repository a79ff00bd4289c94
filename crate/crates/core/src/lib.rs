//! Compact components of relative PSL(2,R) character varieties of punctured
//! spheres, realized through triangle chains in the upper half-plane.
//!
//! The stack, bottom to top: [`hyperbolic`] geometry, [`surface`] words and
//! curves, [`chain`] action-angle coordinates, [`rep`] matrices and angle
//! functions, [`dynamics`] flows, twists and orbits, [`experiments`] and the
//! [`suite`] of numerical checks.

pub mod chain;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hyperbolic;
pub mod rep;
pub mod sampling;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};

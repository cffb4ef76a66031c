//! Complete quadrics: compound matrices and Chow forms, the Picard lattice of
//! the space of complete quadrics, degeneration counts along pencils, the
//! chamber decomposition of the effective cone of complete quadric surfaces,
//! and a small Schubert calculus.

pub mod chambers;
pub mod chowform;
pub mod error;
pub mod pencils;
pub mod picard;
pub mod quadrics;
pub mod random;
pub mod schubert;
pub mod verify;

pub use error::{GeometryError, Result};

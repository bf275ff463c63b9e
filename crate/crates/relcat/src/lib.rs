//! Finite relative and k-relative categories, their nerves and truncated
//! integral homology, n-arrow path/fiber/pullback objects, Grothendieck
//! constructions, and checkers for the B_n/C_n properties, strict 3-arrow
//! calculi, and fibrillations, with a groupoid homotopy-pullback oracle as
//! independent ground truth.

pub mod caps;
pub mod cat;
pub mod corpus;
pub mod error;
pub mod homology;
pub mod ids;
pub mod nerve;
pub mod rel;

pub use caps::Caps;
pub use error::{Error, Result};

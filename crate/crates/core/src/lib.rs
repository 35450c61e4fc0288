//! Exact verification of unit-distance preserving maps of the plane K^2.
//!
//! Arithmetic is exact throughout: rationals, prime fields GF(p), and towers
//! of quadratic extensions of Q. On top of that sit the distance forms, the
//! affine-orthogonal and semi-affine maps, unit-distance chains, and the
//! decomposition of a unit-distance preserver into `I o (gamma, gamma)`.

pub mod chains;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod fields;
pub mod geometry;
pub mod identities;
pub mod maps;
pub mod sampling;
pub mod syntax;

pub use error::{Error, Result};
pub use fields::{Elem, Field, Homomorphism};
pub use geometry::Point;
pub use sampling::Domain;

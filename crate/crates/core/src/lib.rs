pub mod approximation;
pub mod error;
pub mod integral;
pub mod integrability;
pub mod lattice;
pub mod tian;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{Exponent, MonomialIdeal, NewtonPolyhedron, Rational};
pub use toric::{DiagonalZhouWeight, ReferencePair, ToricWeight};

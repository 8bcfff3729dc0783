//! Exact arithmetic layer: rationals, exponents, monomial ideals, Newton
//! polyhedra and the LP solver the rest of the crate is built on.

pub mod exponent;
pub mod ideal;
pub mod lp;
pub mod newton;
pub mod rational;

pub use exponent::Exponent;
pub use ideal::MonomialIdeal;
pub use lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Optimum, Sense};
pub use newton::{Facet, NewtonPolyhedron};
pub use rational::{q, Rational};

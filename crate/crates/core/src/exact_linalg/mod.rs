//! Deterministic exact linear algebra: GF(2) elimination, rational
//! elimination, and integer Smith/Hermite normal forms.

mod gf2;
mod rational;
mod smith;

pub use gf2::{gf2_solve, BitVec, Gf2Matrix, Gf2Solution};
pub use rational::{rational_rank, rational_solve, RationalMatrix, RationalSolution};
pub use smith::{integer_left_kernel, integer_smith, IntMatrix, SmithDecomposition};

pub(crate) use rational::RrefBuilder;

//! Rank-one completion of partially observed tensors.
//!
//! Given observed entries `Q_e != 0` on a pattern `Ω` of a `d`-way tensor,
//! this crate decides whether a rank-one tensor `a ∘ b ∘ c ∘ …` matching the
//! observations exists, whether it is locally and globally unique over ℝ and
//! over ℂ, and enumerates all solutions exactly. The gauge freedom is removed
//! by pinning the first component of every mode except the last to 1.
//!
//! The decision pipeline factors the multiplicative problem into three linear
//! ones over the pattern's design matrix:
//!
//! * magnitudes: `Σ_k log|component|` must reproduce `log|Q_e|` — solved
//!   exactly over the rationals with symbolic right-hand sides;
//! * signs (real case): a linear system over GF(2);
//! * phases (complex case): a congruence system modulo one turn, counted via
//!   the Smith normal form of the design matrix.
//!
//! A `3^m` brute-force enumeration over phase shift assignments is kept as an
//! independent cross-checking oracle for the Smith-normal-form path.

pub mod complex_solver;
pub mod error;
pub mod exact_linalg;
pub mod model;
pub mod noisy_fit;
pub mod pattern;
pub mod real_solver;
pub mod report;

pub use error::{FitError, ModelError, SolveError};
pub use model::{
    FactorComponent, FloatValue, MultiIndex, ObservationPattern, PartialTensor, PhaseTurns,
    PolarScalar, RankOneFactors, Rational, SolutionCount, SolutionSet, ValueMode,
};
pub use pattern::{analyze_pattern, build_design_matrix, DesignMatrix, PatternReport};

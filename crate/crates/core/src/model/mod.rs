//! Core data types: exact scalars, partial tensors, and rank-one factors.

mod factors;
mod parse;
mod scalar;
mod tensor;

pub use factors::{
    sort_solutions, FactorComponent, RankOneFactors, SolutionCount, SolutionSet,
};
pub use parse::{parse_json, parse_slice_text, to_json};
pub use scalar::{
    format_rational, parse_rational, rat, rat_int, rational_ln, rational_pow, rational_to_f64,
    PhaseTurns, PolarScalar, Rational,
};
pub use tensor::{
    unit_power_product, FloatValue, MultiIndex, ObservationPattern, PartialTensor, ValueMode,
};

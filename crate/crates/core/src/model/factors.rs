//! Rank-one factor vectors and solution sets.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ModelError;
use crate::model::scalar::{PhaseTurns, Rational};
use crate::model::tensor::{FloatValue, MultiIndex};

/// One component of a factor vector.
///
/// The magnitude is carried as a float; when the value arose from an exact
/// solve it additionally carries the rational exponent vector `r` such that
/// `magnitude = ∏_e |Q_e|^{r_e}` over the observations in canonical order.
/// Counts and uniqueness decisions never depend on the float part.
#[derive(Clone, Debug)]
pub struct FactorComponent {
    pub magnitude: f64,
    pub magnitude_exponents: Option<Vec<(usize, Rational)>>,
    pub phase: PhaseTurns,
}

impl FactorComponent {
    /// The exact unit component pinned by the gauge normalization.
    pub fn unit() -> Self {
        FactorComponent {
            magnitude: 1.0,
            magnitude_exponents: Some(Vec::new()),
            phase: PhaseTurns::zero(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.magnitude == 1.0
            && self.phase.is_zero()
            && self
                .magnitude_exponents
                .as_ref()
                .map_or(true, |e| e.is_empty())
    }
}

/// `d` factor vectors with the gauge normalization: the first component of
/// every mode except the last equals exactly 1, and all magnitudes are
/// strictly positive.
#[derive(Clone, Debug)]
pub struct RankOneFactors {
    vectors: Vec<Vec<FactorComponent>>,
}

impl RankOneFactors {
    pub fn new(vectors: Vec<Vec<FactorComponent>>) -> Result<Self, ModelError> {
        if vectors.len() < 2 || vectors.iter().any(|v| v.is_empty()) {
            return Err(ModelError::InvalidFactors(
                "need at least two nonempty factor vectors".into(),
            ));
        }
        let d = vectors.len();
        for (k, v) in vectors.iter().enumerate() {
            if k + 1 < d && !v[0].is_unit() {
                return Err(ModelError::InvalidFactors(format!(
                    "first component of mode {} must be exactly 1",
                    k + 1
                )));
            }
            if let Some(bad) = v.iter().position(|c| !(c.magnitude > 0.0)) {
                return Err(ModelError::InvalidFactors(format!(
                    "component {} of mode {} has nonpositive magnitude",
                    bad + 1,
                    k + 1
                )));
            }
        }
        Ok(RankOneFactors { vectors })
    }

    /// The all-ones factors for the given dims.
    pub fn all_ones(dims: &[usize]) -> Self {
        let vectors = dims
            .iter()
            .map(|&n| (0..n).map(|_| FactorComponent::unit()).collect())
            .collect();
        RankOneFactors { vectors }
    }

    /// Renormalizes positive factor vectors into the standard gauge: modes
    /// `1..d−1` are divided by their first component, the last mode absorbs
    /// the product.
    pub fn from_positive(vectors: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        if vectors.len() < 2 || vectors.iter().any(|v| v.is_empty()) {
            return Err(ModelError::InvalidFactors(
                "need at least two nonempty factor vectors".into(),
            ));
        }
        if vectors
            .iter()
            .any(|v| v.iter().any(|&x| !(x.is_finite() && x > 0.0)))
        {
            return Err(ModelError::InvalidFactors(
                "all components must be positive and finite".into(),
            ));
        }
        let d = vectors.len();
        let mut scale = 1.0;
        let mut out: Vec<Vec<FactorComponent>> = Vec::with_capacity(d);
        for (k, v) in vectors.iter().enumerate() {
            if k + 1 < d {
                let head = v[0];
                scale *= head;
                let mut col = Vec::with_capacity(v.len());
                col.push(FactorComponent::unit());
                col.extend(v[1..].iter().map(|&x| FactorComponent {
                    magnitude: x / head,
                    magnitude_exponents: None,
                    phase: PhaseTurns::zero(),
                }));
                out.push(col);
            } else {
                out.push(
                    v.iter()
                        .map(|&x| FactorComponent {
                            magnitude: x * scale,
                            magnitude_exponents: None,
                            phase: PhaseTurns::zero(),
                        })
                        .collect(),
                );
            }
        }
        Ok(RankOneFactors { vectors: out })
    }

    pub fn order(&self) -> usize {
        self.vectors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.len()).collect()
    }

    pub fn vectors(&self) -> &[Vec<FactorComponent>] {
        &self.vectors
    }

    /// Component `index` (1-based) of mode `k` (0-based).
    pub fn component(&self, mode: usize, index: usize) -> &FactorComponent {
        &self.vectors[mode][index - 1]
    }

    /// The rank-one entry at `index`: magnitudes multiply in floating point,
    /// phases add exactly modulo one turn.
    pub fn evaluate(&self, index: &MultiIndex) -> FloatValue {
        assert_eq!(index.order(), self.order(), "index order mismatch");
        let mut magnitude = 1.0;
        let mut phase = PhaseTurns::zero();
        for (mode, vec) in self.vectors.iter().enumerate() {
            let c = &vec[index.coordinate(mode) - 1];
            magnitude *= c.magnitude;
            phase = &phase + &c.phase;
        }
        FloatValue::new(magnitude, phase).expect("product of positive magnitudes is positive")
    }

    /// All phases lie in {0, 1/2}: a real solution.
    pub fn is_real(&self) -> bool {
        self.vectors
            .iter()
            .flatten()
            .all(|c| c.phase.is_real())
    }

    /// Flattened phase vector (mode-major); the canonical ordering key.
    pub fn phase_key(&self) -> Vec<Rational> {
        self.vectors
            .iter()
            .flatten()
            .map(|c| c.phase.as_turns().clone())
            .collect()
    }

    pub fn conjugated(&self) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                v.iter()
                    .map(|c| FactorComponent {
                        magnitude: c.magnitude,
                        magnitude_exponents: c.magnitude_exponents.clone(),
                        phase: -&c.phase,
                    })
                    .collect()
            })
            .collect();
        RankOneFactors { vectors }
    }
}

/// Number of rank-one completions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolutionCount {
    Finite(BigUint),
    Infinite,
}

impl SolutionCount {
    pub fn finite(n: u64) -> Self {
        SolutionCount::Finite(BigUint::from(n))
    }

    /// `2^k`.
    pub fn two_pow(k: usize) -> Self {
        SolutionCount::Finite(BigUint::one() << k)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SolutionCount::Finite(n) if n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, SolutionCount::Finite(n) if n.is_one())
    }

    pub fn to_usize(&self) -> Option<usize> {
        match self {
            SolutionCount::Finite(n) => n.to_usize(),
            SolutionCount::Infinite => None,
        }
    }
}

impl fmt::Display for SolutionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionCount::Finite(n) => write!(f, "{n}"),
            SolutionCount::Infinite => write!(f, "infinite"),
        }
    }
}

/// The set of rank-one completions.
#[derive(Clone, Debug)]
pub enum SolutionSet {
    /// Every solution, in canonical order (lexicographic by phase vector).
    Finite(Vec<RankOneFactors>),
    /// The count exceeded the materialization cap; only a base solution is
    /// listed, with generators carried by the owning result.
    Capped { base: Box<RankOneFactors> },
    /// Infinitely many solutions; one representative of the family.
    Infinite { representative: Box<RankOneFactors> },
}

impl SolutionSet {
    pub fn empty() -> Self {
        SolutionSet::Finite(Vec::new())
    }

    /// Number of materialized solutions, when the set is finite.
    pub fn len_finite(&self) -> Option<usize> {
        match self {
            SolutionSet::Finite(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn first(&self) -> Option<&RankOneFactors> {
        match self {
            SolutionSet::Finite(v) => v.first(),
            SolutionSet::Capped { base } => Some(base),
            SolutionSet::Infinite { representative } => Some(representative),
        }
    }
}

/// Sorts solutions into the canonical order and asserts pairwise distinctness
/// of phase keys (solutions of one tensor share their magnitudes).
pub fn sort_solutions(mut solutions: Vec<RankOneFactors>) -> Vec<RankOneFactors> {
    solutions.sort_by(|a, b| a.phase_key().cmp(&b.phase_key()));
    solutions
}

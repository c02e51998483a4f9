//! Partial tensors: multi-indices, observation patterns, and observed values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::ModelError;
use crate::model::scalar::{rational_ln, rational_to_f64, PhaseTurns, PolarScalar, Rational};

/// A 1-based coordinate tuple `(i_1, …, i_d)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// All coordinates must be ≥ 1.
    pub fn new(coordinates: Vec<usize>) -> Self {
        assert!(
            !coordinates.is_empty() && coordinates.iter().all(|&c| c >= 1),
            "multi-index coordinates are 1-based"
        );
        MultiIndex(coordinates)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Coordinate of mode `k` (0-based mode, 1-based value).
    pub fn coordinate(&self, mode: usize) -> usize {
        self.0[mode]
    }

    pub fn coordinates(&self) -> &[usize] {
        &self.0
    }

    pub fn within(&self, dims: &[usize]) -> bool {
        self.0.len() == dims.len() && self.0.iter().zip(dims).all(|(&c, &n)| c >= 1 && c <= n)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The set `Ω` of observed positions of a `d`-way tensor (`d ≥ 2`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ObservationPattern {
    dims: Vec<usize>,
    indices: BTreeSet<MultiIndex>,
}

impl ObservationPattern {
    pub fn new(
        dims: Vec<usize>,
        indices: impl IntoIterator<Item = MultiIndex>,
    ) -> Result<Self, ModelError> {
        if dims.len() < 2 || dims.iter().any(|&n| n == 0) {
            return Err(ModelError::InvalidDims(format!(
                "need at least two positive dims, got {dims:?}"
            )));
        }
        let mut set = BTreeSet::new();
        for idx in indices {
            if !idx.within(&dims) {
                return Err(ModelError::IndexOutOfRange {
                    index: idx,
                    dims: dims.clone(),
                });
            }
            if !set.insert(idx.clone()) {
                return Err(ModelError::DuplicateIndex { index: idx });
            }
        }
        if set.is_empty() {
            return Err(ModelError::EmptyPattern);
        }
        Ok(ObservationPattern { dims, indices: set })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Tensor order `d`.
    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of observations `m = |Ω|`.
    pub fn m(&self) -> usize {
        self.indices.len()
    }

    /// Observed indices in canonical (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = &MultiIndex> {
        self.indices.iter()
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        self.indices.contains(index)
    }

    /// Unknowns of the pinned log-linear system: `Σ n_k − (d−1)`.
    pub fn unknown_count(&self) -> usize {
        self.dims.iter().sum::<usize>() - (self.order() - 1)
    }
}

/// Observed value in float mode: positive magnitude plus an exact phase.
#[derive(Clone, PartialEq, Debug)]
pub struct FloatValue {
    magnitude: f64,
    phase: PhaseTurns,
}

impl FloatValue {
    pub fn new(magnitude: f64, phase: PhaseTurns) -> Option<Self> {
        (magnitude.is_finite() && magnitude > 0.0).then_some(FloatValue { magnitude, phase })
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> &PhaseTurns {
        &self.phase
    }
}

/// Storage mode of a partial tensor.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ValueMode {
    /// All values carry exact rational magnitudes and phases.
    Exact,
    /// Magnitudes are floating point (noisy data); phases stay exact.
    Float,
}

impl fmt::Display for ValueMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueMode::Exact => write!(f, "exact"),
            ValueMode::Float => write!(f, "float"),
        }
    }
}

#[derive(Clone, Debug)]
enum TensorValues {
    Exact(BTreeMap<MultiIndex, PolarScalar>),
    Float(BTreeMap<MultiIndex, FloatValue>),
}

/// A tensor observed on a pattern `Ω`; every observed value is nonzero.
#[derive(Clone, Debug)]
pub struct PartialTensor {
    pattern: ObservationPattern,
    values: TensorValues,
}

impl PartialTensor {
    pub fn from_exact(
        dims: Vec<usize>,
        entries: impl IntoIterator<Item = (MultiIndex, PolarScalar)>,
    ) -> Result<Self, ModelError> {
        let entries: Vec<_> = entries.into_iter().collect();
        let pattern =
            ObservationPattern::new(dims, entries.iter().map(|(idx, _)| idx.clone()))?;
        let values = entries.into_iter().collect();
        Ok(PartialTensor {
            pattern,
            values: TensorValues::Exact(values),
        })
    }

    pub fn from_float(
        dims: Vec<usize>,
        entries: impl IntoIterator<Item = (MultiIndex, FloatValue)>,
    ) -> Result<Self, ModelError> {
        let entries: Vec<_> = entries.into_iter().collect();
        let pattern =
            ObservationPattern::new(dims, entries.iter().map(|(idx, _)| idx.clone()))?;
        let values = entries.into_iter().collect();
        Ok(PartialTensor {
            pattern,
            values: TensorValues::Float(values),
        })
    }

    pub fn pattern(&self) -> &ObservationPattern {
        &self.pattern
    }

    pub fn mode(&self) -> ValueMode {
        match &self.values {
            TensorValues::Exact(_) => ValueMode::Exact,
            TensorValues::Float(_) => ValueMode::Float,
        }
    }

    /// Exact phase of the observed value at `index`.
    pub fn phase(&self, index: &MultiIndex) -> &PhaseTurns {
        match &self.values {
            TensorValues::Exact(map) => map[index].phase(),
            TensorValues::Float(map) => map[index].phase(),
        }
    }

    /// `log |Q_index|` as a float.
    pub fn log_magnitude(&self, index: &MultiIndex) -> f64 {
        match &self.values {
            TensorValues::Exact(map) => rational_ln(map[index].magnitude()),
            TensorValues::Float(map) => map[index].magnitude().ln(),
        }
    }

    pub fn magnitude_f64(&self, index: &MultiIndex) -> f64 {
        match &self.values {
            TensorValues::Exact(map) => rational_to_f64(map[index].magnitude()),
            TensorValues::Float(map) => map[index].magnitude(),
        }
    }

    /// Exact value, available in exact mode only.
    pub fn exact_value(&self, index: &MultiIndex) -> Option<&PolarScalar> {
        match &self.values {
            TensorValues::Exact(map) => map.get(index),
            TensorValues::Float(_) => None,
        }
    }

    /// All phases lie on the real axis (0 or 1/2 turns).
    pub fn is_real(&self) -> bool {
        self.pattern.indices().all(|idx| self.phase(idx).is_real())
    }

    /// First observation with a phase off the real axis, if any.
    pub fn first_non_real(&self) -> Option<&MultiIndex> {
        self.pattern.indices().find(|idx| !self.phase(idx).is_real())
    }

    /// All observed values are strictly positive reals.
    pub fn is_positive_real(&self) -> bool {
        self.pattern.indices().all(|idx| self.phase(idx).is_zero())
    }

    /// All magnitudes are exactly 1 (exact mode only).
    pub fn has_unit_magnitudes(&self) -> bool {
        match &self.values {
            TensorValues::Exact(map) => map.values().all(|v| v.magnitude().is_one()),
            TensorValues::Float(_) => false,
        }
    }

    /// The tensor with every observed value conjugated (phases negated).
    pub fn conjugated(&self) -> Self {
        let values = match &self.values {
            TensorValues::Exact(map) => TensorValues::Exact(
                map.iter()
                    .map(|(idx, v)| (idx.clone(), v.conjugate()))
                    .collect(),
            ),
            TensorValues::Float(map) => TensorValues::Float(
                map.iter()
                    .map(|(idx, v)| {
                        let conj = FloatValue::new(v.magnitude(), -v.phase())
                            .expect("conjugation preserves positivity");
                        (idx.clone(), conj)
                    })
                    .collect(),
            ),
        };
        PartialTensor {
            pattern: self.pattern.clone(),
            values,
        }
    }
}

/// True when `∏ |values|^{exponents}` equals exactly 1.
///
/// Exponents may be rational; denominators are cleared first, which is valid
/// because positive reals have unique positive roots.
pub fn unit_power_product(values: &[Rational], exponents: &[(usize, Rational)]) -> bool {
    use num_integer::Integer;

    let mut lcm = num_bigint::BigInt::one();
    for (_, e) in exponents {
        lcm = lcm.lcm(e.denom());
    }
    let mut acc = Rational::one();
    for (i, e) in exponents {
        let int_exp = (e * Rational::from_integer(lcm.clone())).to_integer();
        if int_exp.is_zero() {
            continue;
        }
        acc *= crate::model::scalar::rational_pow(&values[*i], &int_exp);
    }
    acc.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::scalar::rat;

    fn idx(coords: &[usize]) -> MultiIndex {
        MultiIndex::new(coords.to_vec())
    }

    #[test]
    fn pattern_rejects_bad_input() {
        assert!(matches!(
            ObservationPattern::new(vec![3], [idx(&[1])]),
            Err(ModelError::InvalidDims(_))
        ));
        assert!(matches!(
            ObservationPattern::new(vec![2, 2], []),
            Err(ModelError::EmptyPattern)
        ));
        assert!(matches!(
            ObservationPattern::new(vec![2, 2], [idx(&[3, 1])]),
            Err(ModelError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            ObservationPattern::new(vec![2, 2], [idx(&[1, 1]), idx(&[1, 1])]),
            Err(ModelError::DuplicateIndex { .. })
        ));
    }

    #[test]
    fn unknown_count_matches_pinning() {
        let p = ObservationPattern::new(vec![3, 3, 3], [idx(&[1, 1, 1])]).unwrap();
        assert_eq!(p.unknown_count(), 7);
        let q = ObservationPattern::new(vec![2, 2], [idx(&[1, 1])]).unwrap();
        assert_eq!(q.unknown_count(), 3);
    }

    #[test]
    fn indices_iterate_lexicographically() {
        let p = ObservationPattern::new(
            vec![2, 2, 2],
            [idx(&[2, 1, 1]), idx(&[1, 2, 1]), idx(&[1, 1, 2])],
        )
        .unwrap();
        let order: Vec<_> = p.indices().cloned().collect();
        assert_eq!(
            order,
            vec![idx(&[1, 1, 2]), idx(&[1, 2, 1]), idx(&[2, 1, 1])]
        );
    }

    #[test]
    fn unit_power_product_detects_relations() {
        let values = vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(6, 1)];
        // 1^-1 * 2^-1 * 3^-1 * 6^1 = 1
        let exps = vec![
            (0, rat(-1, 1)),
            (1, rat(-1, 1)),
            (2, rat(-1, 1)),
            (3, rat(1, 1)),
        ];
        assert!(unit_power_product(&values, &exps));
        let values_bad = vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(7, 1)];
        assert!(!unit_power_product(&values_bad, &exps));
        // fractional exponents: (4/9)^(1/2) * (3/2)^1 = 1
        let values_frac = vec![rat(4, 9), rat(3, 2)];
        let exps_frac = vec![(0, rat(1, 2)), (1, rat(1, 1))];
        assert!(unit_power_product(&values_frac, &exps_frac));
    }

    #[test]
    fn conjugation_flips_phases() {
        let t = PartialTensor::from_exact(
            vec![2, 2],
            [(
                idx(&[1, 1]),
                PolarScalar::new(rat(1, 1), PhaseTurns::new(rat(1, 3))).unwrap(),
            )],
        )
        .unwrap();
        let c = t.conjugated();
        assert_eq!(c.phase(&idx(&[1, 1])).as_turns(), &rat(2, 3));
    }
}

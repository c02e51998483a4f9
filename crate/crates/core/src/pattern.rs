//! The design matrix of an observation pattern and the local-uniqueness
//! test.
//!
//! Taking logs of `|Q_e| = ∏_k |x^{(k)}_{i_k}|` turns the magnitude problem
//! into the linear system `Σ_k x^{(k)}_{i_k} = log |Q_e|` over the pattern.
//! The scale gauge is removed by pinning the first variable of every mode
//! except the last to zero, leaving `Σ_k n_k − (d−1)` unknowns. Condition
//! (A) asks that the homogeneous system has only the zero solution, i.e.
//! that the 0/1 design matrix below has full column rank; by the paper's
//! local-uniqueness criterion this is exactly local uniqueness of the
//! rank-one completion, over ℝ and over ℂ alike.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact_linalg::{Gf2Matrix, IntMatrix, RationalMatrix, RrefBuilder};
use crate::model::{MultiIndex, ObservationPattern, Rational};

/// Identifies the variable behind a design-matrix column: 1-based mode and
/// 1-based component index within that mode.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ColumnLabel {
    pub mode: usize,
    pub index: usize,
}

/// The 0/1 incidence matrix of the pinned log-linear system.
///
/// Rows are observations in lexicographic order; columns are the unpinned
/// variables, mode-major then by index. Each row carries between 1 and `d`
/// ones.
#[derive(Clone, Debug)]
pub struct DesignMatrix {
    dims: Vec<usize>,
    row_labels: Vec<MultiIndex>,
    column_labels: Vec<ColumnLabel>,
    /// Column ids of the ones in each row, ascending.
    rows: Vec<Vec<usize>>,
    /// Column id of the first variable of each mode.
    mode_offsets: Vec<usize>,
}

impl DesignMatrix {
    /// Number of observations (rows).
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of unpinned variables (columns): `Σ n_k − (d−1)`.
    pub fn unknowns(&self) -> usize {
        self.column_labels.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn row_labels(&self) -> &[MultiIndex] {
        &self.row_labels
    }

    pub fn column_labels(&self) -> &[ColumnLabel] {
        &self.column_labels
    }

    /// Columns with a 1 in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Column of variable (`mode`, `index`), both 1-based; `None` when the
    /// variable is pinned by the gauge.
    pub fn column_of(&self, mode: usize, index: usize) -> Option<usize> {
        let d = self.dims.len();
        debug_assert!(mode >= 1 && mode <= d && index >= 1 && index <= self.dims[mode - 1]);
        if mode < d && index == 1 {
            return None;
        }
        let skip = if mode < d { 2 } else { 1 };
        Some(self.mode_offsets[mode - 1] + index - skip)
    }

    pub fn to_rational(&self) -> RationalMatrix {
        let mut a = RationalMatrix::zeros(self.m(), self.unknowns());
        for (r, support) in self.rows.iter().enumerate() {
            for &c in support {
                *a.at_mut(r, c) = Rational::one();
            }
        }
        a
    }

    pub fn to_gf2(&self) -> Gf2Matrix {
        let mut a = Gf2Matrix::zeros(self.m(), self.unknowns());
        for (r, support) in self.rows.iter().enumerate() {
            for &c in support {
                a.set(r, c, true);
            }
        }
        a
    }

    pub fn to_int(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.m(), self.unknowns());
        for (r, support) in self.rows.iter().enumerate() {
            for &c in support {
                *a.at_mut(r, c) = BigInt::one();
            }
        }
        a
    }
}

/// Builds the design matrix of a pattern.
pub fn build_design_matrix(pattern: &ObservationPattern) -> DesignMatrix {
    let dims = pattern.dims().to_vec();
    let d = dims.len();

    let mut column_labels = Vec::with_capacity(pattern.unknown_count());
    let mut mode_offsets = Vec::with_capacity(d);
    for (k, &n) in dims.iter().enumerate() {
        mode_offsets.push(column_labels.len());
        let first = if k + 1 < d { 2 } else { 1 };
        for i in first..=n {
            column_labels.push(ColumnLabel { mode: k + 1, index: i });
        }
    }

    let row_labels: Vec<MultiIndex> = pattern.indices().cloned().collect();
    let mut dm = DesignMatrix {
        dims,
        row_labels,
        column_labels,
        rows: Vec::with_capacity(pattern.m()),
        mode_offsets,
    };
    for idx in pattern.indices() {
        let mut support = Vec::with_capacity(dm.dims.len());
        for (k, &i) in idx.coordinates().iter().enumerate() {
            if let Some(col) = dm.column_of(k + 1, i) {
                support.push(col);
            }
        }
        debug_assert!(!support.is_empty(), "last mode is never pinned");
        dm.rows.push(support);
    }
    dm
}

/// Summary of the pattern's linear structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PatternReport {
    pub m: usize,
    pub unknowns: usize,
    /// Exact rank of the design matrix over the rationals.
    pub rank: usize,
    /// Condition (A): full column rank, i.e. local uniqueness.
    pub condition_a: bool,
    /// `unknowns − rank`; positive means an affine family of log-solutions.
    pub dof: usize,
    /// `unknowns < m`: generic noisy data admits no exact completion.
    pub overdetermined: bool,
}

/// Exact rank of the design matrix, computed incrementally so that tall
/// full-column-rank matrices exit after the first independent rows.
pub(crate) fn design_rank(dm: &DesignMatrix) -> usize {
    design_rref(dm).rank()
}

/// RREF of the design matrix over the rationals.
pub(crate) fn design_rref(dm: &DesignMatrix) -> RrefBuilder {
    let n = dm.unknowns();
    let mut rref = RrefBuilder::new(n);
    for support in &dm.rows {
        if rref.is_full_column_rank() {
            break;
        }
        let mut row = vec![Rational::zero(); n];
        for &c in support {
            row[c] = Rational::one();
        }
        rref.reduce(&mut row);
        if row.iter().any(|x| !x.is_zero()) {
            rref.insert(row);
        }
    }
    rref
}

/// Decides condition (A) by exact rational rank.
pub fn analyze_pattern(pattern: &ObservationPattern) -> PatternReport {
    let dm = build_design_matrix(pattern);
    analyze_design(&dm)
}

pub fn analyze_design(dm: &DesignMatrix) -> PatternReport {
    let m = dm.m();
    let unknowns = dm.unknowns();
    let rank = design_rank(dm);
    PatternReport {
        m,
        unknowns,
        rank,
        condition_a: rank == unknowns,
        dof: unknowns - rank,
        overdetermined: unknowns < m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{rational_rank, rational_solve, RationalSolution};
    use crate::model::{parse_slice_text, rat_int};

    pub(crate) const TABLE1: &str = "\
1 1 1 | 1 * * | 1 * *
1 * * | * * * | * * *
1 * * | * * * | * * *";
    pub(crate) const TABLE4: &str = "\
-1 * 1 | * * * | * * *
 1 * * | * * * | * 1 *
 * 1 * | 1 * * | * * 1";

    fn idx(coords: &[usize]) -> MultiIndex {
        MultiIndex::new(coords.to_vec())
    }

    #[test]
    fn single_observation_single_cell() {
        let p = ObservationPattern::new(vec![1, 1, 1], [idx(&[1, 1, 1])]).unwrap();
        let dm = build_design_matrix(&p);
        assert_eq!(dm.m(), 1);
        assert_eq!(dm.unknowns(), 1);
        assert_eq!(dm.row_support(0), &[0]);
        assert_eq!(dm.column_labels(), &[ColumnLabel { mode: 3, index: 1 }]);
    }

    #[test]
    fn table1_design_is_square_full_rank() {
        let t = parse_slice_text(TABLE1).unwrap();
        let dm = build_design_matrix(t.pattern());
        assert_eq!(dm.m(), 7);
        assert_eq!(dm.unknowns(), 7);
        let report = analyze_design(&dm);
        assert!(report.condition_a);
        assert_eq!(report.rank, 7);
        assert_eq!(report.dof, 0);
        assert!(!report.overdetermined);
        // agreement with the generic rank routine
        assert_eq!(rational_rank(&dm.to_rational()), 7);
    }

    #[test]
    fn matrix_case_full_pattern() {
        let indices = [idx(&[1, 1]), idx(&[1, 2]), idx(&[2, 1]), idx(&[2, 2])];
        let p = ObservationPattern::new(vec![2, 2], indices).unwrap();
        let dm = build_design_matrix(&p);
        assert_eq!(dm.m(), 4);
        assert_eq!(dm.unknowns(), 3);
        let report = analyze_design(&dm);
        assert!(report.condition_a);
        assert!(report.overdetermined);
    }

    #[test]
    fn lone_observation_leaves_dof() {
        let p = ObservationPattern::new(vec![2, 2, 2], [idx(&[1, 1, 1])]).unwrap();
        let report = analyze_pattern(&p);
        assert_eq!(report.unknowns, 4);
        assert_eq!(report.rank, 1);
        assert!(!report.condition_a);
        assert_eq!(report.dof, 3);
    }

    #[test]
    fn table4_satisfies_condition_a() {
        let t = parse_slice_text(TABLE4).unwrap();
        let report = analyze_pattern(t.pattern());
        assert!(report.condition_a);
    }

    #[test]
    fn condition_a_means_trivial_homogeneous_solution() {
        let t = parse_slice_text(TABLE1).unwrap();
        let dm = build_design_matrix(t.pattern());
        let zero = vec![rat_int(0); dm.m()];
        match rational_solve(&dm.to_rational(), &zero).unwrap() {
            RationalSolution::Unique(x) => assert!(x.iter().all(|v| v == &rat_int(0))),
            other => panic!("expected unique zero solution, got {other:?}"),
        }
    }

    #[test]
    fn mode_permutation_preserves_report() {
        let t = parse_slice_text(TABLE4).unwrap();
        let base = analyze_pattern(t.pattern());
        // permute modes cyclically: (i,j,k) -> (j,k,i)
        let permuted: Vec<MultiIndex> = t
            .pattern()
            .indices()
            .map(|i| {
                idx(&[
                    i.coordinate(1),
                    i.coordinate(2),
                    i.coordinate(0),
                ])
            })
            .collect();
        let p = ObservationPattern::new(vec![3, 3, 3], permuted).unwrap();
        let report = analyze_pattern(&p);
        assert_eq!(report.m, base.m);
        assert_eq!(report.unknowns, base.unknowns);
        assert_eq!(report.rank, base.rank);
        assert_eq!(report.condition_a, base.condition_a);
    }

    #[test]
    fn condition_a_requires_enough_observations() {
        // necessary counting condition: condition (A) forces unknowns <= m
        let mut state = 0x2718u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..50 {
            let dims = vec![
                (next() % 3 + 1) as usize,
                (next() % 3 + 1) as usize,
                (next() % 3 + 1) as usize,
            ];
            let total: usize = dims.iter().product();
            let want = (next() as usize % total) + 1;
            let mut indices = Vec::new();
            'fill: for i in 1..=dims[0] {
                for j in 1..=dims[1] {
                    for k in 1..=dims[2] {
                        if next() % 2 == 0 {
                            indices.push(idx(&[i, j, k]));
                            if indices.len() == want {
                                break 'fill;
                            }
                        }
                    }
                }
            }
            if indices.is_empty() {
                continue;
            }
            let p = ObservationPattern::new(dims, indices).unwrap();
            let report = analyze_pattern(&p);
            if report.condition_a {
                assert!(report.unknowns <= report.m);
            }
        }
    }
}

//! Dense exact linear algebra over the rationals.

use num_traits::{One, Signed, Zero};

use crate::error::SolveError;
use crate::model::Rational;

/// Dense matrix of reduced rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(r > 0 && c > 0 && rows.iter().all(|row| row.len() == c));
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Classification of the solutions of `A·x = b` over the rationals.
#[derive(Clone, Debug)]
pub enum RationalSolution {
    Inconsistent,
    Unique(Vec<Rational>),
    Affine {
        particular: Vec<Rational>,
        kernel_basis: Vec<Vec<Rational>>,
    },
}

/// Incremental reduced row echelon form used by [`rational_rank`] and
/// [`rational_solve`]; rows are inserted one at a time, so full-column-rank
/// detection can exit early on tall matrices.
pub(crate) struct RrefBuilder {
    cols: usize,
    /// RREF rows ordered by pivot column; the pivot entry is 1.
    rows: Vec<Vec<Rational>>,
    pivot_cols: Vec<usize>,
}

impl RrefBuilder {
    pub(crate) fn new(cols: usize) -> Self {
        RrefBuilder {
            cols,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_full_column_rank(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub(crate) fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub(crate) fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Reduces `row` against the echelon in place, returning the applied
    /// operations `(echelon_row, coefficient)` so callers can mirror them on
    /// parallel data (e.g. symbolic right-hand sides).
    pub(crate) fn reduce(&self, row: &mut [Rational]) -> Vec<(usize, Rational)> {
        debug_assert_eq!(row.len(), self.cols);
        let mut ops = Vec::new();
        for (i, &pc) in self.pivot_cols.iter().enumerate() {
            if row[pc].is_zero() {
                continue;
            }
            let coeff = row[pc].clone();
            for (dst, src) in row.iter_mut().zip(&self.rows[i]) {
                if !src.is_zero() {
                    *dst -= &coeff * src;
                }
            }
            ops.push((i, coeff));
        }
        ops
    }

    /// Inserts an already reduced nonzero row, keeping the echelon in RREF.
    /// The returned record lists the normalization divisor, the
    /// back-eliminations applied to existing rows, and the insertion
    /// position, so callers can replay them on parallel data.
    pub(crate) fn insert(&mut self, mut row: Vec<Rational>) -> InsertRecord {
        let pivot = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("insert requires a nonzero row");
        let lead = row[pivot].clone();
        if !lead.is_one() {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x /= &lead;
                }
            }
        }

        // keep RREF: clear this column from existing rows
        let mut back_elims = Vec::new();
        for i in 0..self.rows.len() {
            if self.rows[i][pivot].is_zero() {
                continue;
            }
            let coeff = self.rows[i][pivot].clone();
            for (dst, src) in self.rows[i].iter_mut().zip(&row) {
                if !src.is_zero() {
                    *dst = &*dst - &(&coeff * src);
                }
            }
            back_elims.push((i, coeff));
        }

        let pos = self
            .pivot_cols
            .iter()
            .position(|&pc| pc > pivot)
            .unwrap_or(self.pivot_cols.len());
        self.pivot_cols.insert(pos, pivot);
        self.rows.insert(pos, row);
        InsertRecord {
            lead,
            back_elims,
            pos,
        }
    }

    /// Kernel basis vectors, one per free column, sign-normalized so the
    /// first nonzero entry is positive.
    pub(crate) fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.cols];
        for &c in &self.pivot_cols {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (i, &pc) in self.pivot_cols.iter().enumerate() {
                    if !self.rows[i][free].is_zero() {
                        v[pc] = -self.rows[i][free].clone();
                    }
                }
                normalize_sign(&mut v);
                v
            })
            .collect()
    }
}

/// Row operations performed by [`RrefBuilder::insert`], for replay on
/// parallel data.
pub(crate) struct InsertRecord {
    pub lead: Rational,
    pub back_elims: Vec<(usize, Rational)>,
    pub pos: usize,
}

pub(crate) fn normalize_sign(v: &mut [Rational]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = -x.clone();
                }
            }
        }
    }
}

/// Exact rank over the rationals.
pub fn rational_rank(a: &RationalMatrix) -> usize {
    let mut rref = RrefBuilder::new(a.cols);
    for r in 0..a.rows {
        let mut row = a.row(r).to_vec();
        rref.reduce(&mut row);
        if row.iter().any(|x| !x.is_zero()) {
            rref.insert(row);
            if rref.is_full_column_rank() {
                break;
            }
        }
    }
    rref.rank()
}

/// Exact solution classification of `A·x = b`.
pub fn rational_solve(
    a: &RationalMatrix,
    b: &[Rational],
) -> Result<RationalSolution, SolveError> {
    if b.len() != a.rows {
        return Err(SolveError::DimensionMismatch(format!(
            "rhs has {} entries, matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    // run the RREF over the augmented matrix [A | b]
    let mut rref = RrefBuilder::new(a.cols + 1);
    for r in 0..a.rows {
        let mut row = a.row(r).to_vec();
        row.push(b[r].clone());
        rref.reduce(&mut row);
        if row[..a.cols].iter().any(|x| !x.is_zero()) {
            rref.insert(row);
        } else if !row[a.cols].is_zero() {
            return Ok(RationalSolution::Inconsistent);
        }
    }

    let mut particular = vec![Rational::zero(); a.cols];
    for (i, &pc) in rref.pivot_cols().iter().enumerate() {
        particular[pc] = rref.rows()[i][a.cols].clone();
    }

    // kernel of A alone: drop the augmented column from the basis
    let mut is_pivot = vec![false; a.cols];
    for &c in rref.pivot_cols() {
        is_pivot[c] = true;
    }
    let kernel_basis: Vec<Vec<Rational>> = (0..a.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); a.cols];
            v[free] = Rational::one();
            for (i, &pc) in rref.pivot_cols().iter().enumerate() {
                if !rref.rows()[i][free].is_zero() {
                    v[pc] = -rref.rows()[i][free].clone();
                }
            }
            normalize_sign(&mut v);
            v
        })
        .collect();

    if kernel_basis.is_empty() {
        Ok(RationalSolution::Unique(particular))
    } else {
        Ok(RationalSolution::Affine {
            particular,
            kernel_basis,
        })
    }
}

//! Integer matrices, Smith normal form with unimodular transforms, and
//! integer left kernels via Hermite normal form.
//!
//! All arithmetic uses arbitrary-precision integers; intermediate growth can
//! never overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense matrix of big integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(r > 0 && c > 0 && rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Applies this matrix to a vector.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.at(r, c) * &v[c])
                    .sum()
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row_dst += q · row_src`
    fn row_add_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = self.at(src, c) * q;
            *self.at_mut(dst, c) += add;
        }
    }

    /// `col_dst += q · col_src`
    fn col_add_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = self.at(r, src) * q;
            *self.at_mut(r, dst) += add;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            *self.at_mut(r, c) = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.at(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m.at(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j);
                    *m.at_mut(i, j) = num / &prev;
                }
                *m.at_mut(i, k) = BigInt::zero();
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1).clone()
    }
}

/// Smith normal form `U·A·V = diag(divisors)` with unimodular `U`, `V`.
///
/// Divisors are positive, each divides the next, and the list is padded with
/// zeros to `min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Product of the nonzero divisors (1 for an empty product).
    pub fn torsion_order(&self) -> BigInt {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero())
            .product()
    }
}

/// Position of the entry with minimal nonzero absolute value in the trailing
/// submatrix, lowest row then lowest column on ties.
fn select_pivot(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in from..m.rows() {
        for c in from..m.cols() {
            let v = m.at(r, c);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best {
                Some((cur, _, _)) if *cur <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Computes the Smith normal form of `A` with full transforms.
pub fn integer_smith(a: &IntMatrix) -> SmithDecomposition {
    let mut m = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let size = a.rows().min(a.cols());

    let mut t = 0;
    while t < size {
        let Some((pr, pc)) = select_pivot(&m, t) else {
            break;
        };
        m.swap_rows(t, pr);
        u.swap_rows(t, pr);
        m.swap_cols(t, pc);
        v.swap_cols(t, pc);

        // clear row t and column t; remainders may shrink the pivot, so loop
        loop {
            let mut clean = true;
            for r in t + 1..m.rows() {
                if !m.at(r, t).is_zero() {
                    let q = -m.at(r, t).div_floor(m.at(t, t));
                    m.row_add_mul(r, t, &q);
                    u.row_add_mul(r, t, &q);
                    if !m.at(r, t).is_zero() {
                        // remainder is smaller than the pivot: promote it
                        m.swap_rows(t, r);
                        u.swap_rows(t, r);
                        clean = false;
                    }
                }
            }
            for c in t + 1..m.cols() {
                if !m.at(t, c).is_zero() {
                    let q = -m.at(t, c).div_floor(m.at(t, t));
                    m.col_add_mul(c, t, &q);
                    v.col_add_mul(c, t, &q);
                    if !m.at(t, c).is_zero() {
                        m.swap_cols(t, c);
                        v.swap_cols(t, c);
                        clean = false;
                    }
                }
            }
            let row_clear = (t + 1..m.rows()).all(|r| m.at(r, t).is_zero());
            let col_clear = (t + 1..m.cols()).all(|c| m.at(t, c).is_zero());
            if clean && row_clear && col_clear {
                break;
            }
        }

        if m.at(t, t).is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    // enforce the divisibility chain d_i | d_{i+1}
    let rank = (0..size).take_while(|&i| !m.at(i, i).is_zero()).count();
    if rank > 1 {
        'chain: loop {
            for i in 0..rank - 1 {
                let x = m.at(i, i).clone();
                let y = m.at(i + 1, i + 1).clone();
                if (&y % &x).is_zero() {
                    continue;
                }
                // diag(x, y) -> diag(gcd, lcm) via det-1 elementary ops:
                // add column i+1 to column i, then re-eliminate at (i, i).
                m.col_add_mul(i, i + 1, &BigInt::one());
                v.col_add_mul(i, i + 1, &BigInt::one());
                // m now has y in position (i+1, i); clear the 2x2 block
                let g = x.gcd(&y);
                let egcd = x.extended_gcd(&y);
                let (s, tt) = (egcd.x, egcd.y);
                debug_assert_eq!(&s * &x + &tt * &y, g);
                // row ops: R_i := s·R_i + t·R_{i+1}; R_{i+1} adjusted to keep det ±1
                let a_over = &x / &g;
                let b_over = &y / &g;
                apply_two_row_transform(&mut m, &mut u, i, i + 1, &s, &tt, &-&b_over, &a_over);
                // column cleanup: col_{i+1} -= (y·t? ...) recompute directly
                let mii = m.at(i, i).clone();
                let q = -m.at(i, i + 1).div_floor(&mii);
                m.col_add_mul(i + 1, i, &q);
                v.col_add_mul(i + 1, i, &q);
                if m.at(i, i).is_negative() {
                    m.negate_row(i);
                    u.negate_row(i);
                }
                if m.at(i + 1, i + 1).is_negative() {
                    m.negate_row(i + 1);
                    u.negate_row(i + 1);
                }
                continue 'chain;
            }
            break;
        }
    }

    let divisors: Vec<BigInt> = (0..size).map(|i| m.at(i, i).clone()).collect();
    let result = SmithDecomposition { u, v, divisors };
    #[cfg(debug_assertions)]
    verify_reconstruction(a, &result);
    result
}

/// `U·A·V = diag(divisors)`, divisor chain, and unimodularity, verified on
/// every call in test builds.
#[cfg(debug_assertions)]
fn verify_reconstruction(a: &IntMatrix, s: &SmithDecomposition) {
    let uav = s.u.mul(a).mul(&s.v);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let expected = if r == c && r < s.divisors.len() {
                s.divisors[r].clone()
            } else {
                BigInt::zero()
            };
            assert_eq!(uav.at(r, c), &expected, "SNF reconstruction failed");
        }
    }
    for w in s.divisors.windows(2) {
        if !w[1].is_zero() {
            assert!(!w[0].is_zero(), "zero divisor before a nonzero one");
            assert!((&w[1] % &w[0]).is_zero(), "divisor chain violated");
        }
    }
    assert!(s.u.determinant().abs().is_one());
    assert!(s.v.determinant().abs().is_one());
}

/// Applies the 2×2 integer transform [[a, b], [c, d]] (determinant ±1) to
/// rows `r0`, `r1` of `m` and `u`.
fn apply_two_row_transform(
    m: &mut IntMatrix,
    u: &mut IntMatrix,
    r0: usize,
    r1: usize,
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    d: &BigInt,
) {
    debug_assert!((a * d - b * c).abs().is_one());
    for target in [&mut *m, &mut *u] {
        for col in 0..target.cols() {
            let x = target.at(r0, col).clone();
            let y = target.at(r1, col).clone();
            *target.at_mut(r0, col) = a * &x + b * &y;
            *target.at_mut(r1, col) = c * &x + d * &y;
        }
    }
}

/// Basis of the integer left kernel `{u : uᵀ·A = 0}` via row Hermite form.
///
/// Rows of the unimodular transform aligned with zero rows of the echelon
/// form a lattice basis; vectors are sign-normalized so their first nonzero
/// entry is positive.
pub fn integer_left_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let m = a.rows();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);

    let mut pivot_row = 0usize;
    for col in 0..h.cols() {
        if pivot_row == m {
            break;
        }
        // reduce entries below pivot_row in this column to zero by gcd steps
        loop {
            let mut min_row = None;
            let mut min_abs: Option<BigInt> = None;
            for r in pivot_row..m {
                let v = h.at(r, col);
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if min_abs.as_ref().is_none_or(|cur| a < *cur) {
                    min_abs = Some(a);
                    min_row = Some(r);
                }
            }
            let Some(mr) = min_row else {
                break;
            };
            h.swap_rows(pivot_row, mr);
            u.swap_rows(pivot_row, mr);
            let mut any_left = false;
            for r in pivot_row + 1..m {
                if !h.at(r, col).is_zero() {
                    let q = -h.at(r, col).div_floor(h.at(pivot_row, col));
                    h.row_add_mul(r, pivot_row, &q);
                    u.row_add_mul(r, pivot_row, &q);
                    if !h.at(r, col).is_zero() {
                        any_left = true;
                    }
                }
            }
            if !any_left {
                break;
            }
        }
        if !h.at(pivot_row, col).is_zero() {
            if h.at(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            pivot_row += 1;
        }
    }

    (pivot_row..m)
        .map(|r| {
            let mut v: Vec<BigInt> = (0..m).map(|c| u.at(r, c).clone()).collect();
            if let Some(first) = v.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in v.iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
            v
        })
        .collect()
}

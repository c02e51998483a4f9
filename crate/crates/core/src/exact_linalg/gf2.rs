//! Bit-packed Gaussian elimination over GF(2).

use crate::error::SolveError;

/// A bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// A dense 0/1 matrix with bit-packed rows.
#[derive(Clone, Debug)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    /// `A · v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.data[r].words.iter().zip(&v.words) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }
}

/// Result of solving `A·x = b` over GF(2).
#[derive(Clone, Debug)]
pub enum Gf2Solution {
    Inconsistent,
    Unique(BitVec),
    Affine {
        particular: BitVec,
        kernel_basis: Vec<BitVec>,
    },
}

impl Gf2Solution {
    pub fn kernel_dim(&self) -> usize {
        match self {
            Gf2Solution::Inconsistent | Gf2Solution::Unique(_) => 0,
            Gf2Solution::Affine { kernel_basis, .. } => kernel_basis.len(),
        }
    }

    pub fn particular(&self) -> Option<&BitVec> {
        match self {
            Gf2Solution::Inconsistent => None,
            Gf2Solution::Unique(p) => Some(p),
            Gf2Solution::Affine { particular, .. } => Some(particular),
        }
    }
}

/// Solves `A·x = b` over GF(2) with deterministic pivoting (columns scanned
/// in order, the lowest available row is chosen for each pivot).
pub fn gf2_solve(a: &Gf2Matrix, b: &BitVec) -> Result<Gf2Solution, SolveError> {
    if b.len() != a.rows() {
        return Err(SolveError::DimensionMismatch(format!(
            "rhs has {} entries, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let mut rows = a.data.clone();
    let mut rhs = b.clone();
    let m = a.rows();
    let n = a.cols();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (rhs_rank, rhs_pivot) = (rhs.get(rank), rhs.get(pivot));
        rhs.set(rank, rhs_pivot);
        rhs.set(pivot, rhs_rank);
        // full reduction keeps the echelon in RREF
        let pivot_row = rows[rank].clone();
        let pivot_rhs = rhs.get(rank);
        for r in 0..m {
            if r != rank && rows[r].get(col) {
                rows[r].xor_assign(&pivot_row);
                let v = rhs.get(r) ^ pivot_rhs;
                rhs.set(r, v);
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }

    for r in rank..m {
        if rhs.get(r) {
            return Ok(Gf2Solution::Inconsistent);
        }
    }

    let mut particular = BitVec::zeros(n);
    for (i, &col) in pivot_cols.iter().enumerate() {
        particular.set(col, rhs.get(i));
    }

    let is_pivot = {
        let mut mask = vec![false; n];
        for &c in &pivot_cols {
            mask[c] = true;
        }
        mask
    };
    let mut kernel_basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(n);
        v.set(free, true);
        for (i, &col) in pivot_cols.iter().enumerate() {
            if rows[i].get(free) {
                v.set(col, true);
            }
        }
        kernel_basis.push(v);
    }

    if kernel_basis.is_empty() {
        Ok(Gf2Solution::Unique(particular))
    } else {
        Ok(Gf2Solution::Affine {
            particular,
            kernel_basis,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(v: &[u8]) -> BitVec {
        BitVec::from_bits(v.iter().map(|&b| b == 1))
    }

    #[test]
    fn identity_is_unique() {
        let a = Gf2Matrix::identity(3);
        let b = bits(&[1, 0, 1]);
        match gf2_solve(&a, &b).unwrap() {
            Gf2Solution::Unique(x) => assert_eq!(x, b),
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn single_equation_two_unknowns() {
        let mut a = Gf2Matrix::zeros(1, 2);
        a.set(0, 0, true);
        a.set(0, 1, true);
        let b = bits(&[1]);
        match gf2_solve(&a, &b).unwrap() {
            Gf2Solution::Affine {
                particular,
                kernel_basis,
            } => {
                assert_eq!(particular, bits(&[1, 0]));
                assert_eq!(kernel_basis, vec![bits(&[1, 1])]);
            }
            other => panic!("expected affine, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_system() {
        let mut a = Gf2Matrix::zeros(2, 1);
        a.set(0, 0, true);
        a.set(1, 0, true);
        let b = bits(&[1, 0]);
        assert!(matches!(
            gf2_solve(&a, &b).unwrap(),
            Gf2Solution::Inconsistent
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Gf2Matrix::identity(2);
        assert!(gf2_solve(&a, &bits(&[1])).is_err());
    }

    #[test]
    fn solutions_satisfy_system_and_count_matches_enumeration() {
        // deterministic fuzz over small random-ish matrices
        let mut state = 0x12345678u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..200 {
            let m = (next() % 5 + 1) as usize;
            let n = (next() % 5 + 1) as usize;
            let mut a = Gf2Matrix::zeros(m, n);
            for r in 0..m {
                for c in 0..n {
                    a.set(r, c, next() % 2 == 1);
                }
            }
            let b = BitVec::from_bits((0..m).map(|_| next() % 2 == 1));

            // exhaustive count
            let mut expected = 0usize;
            for mask in 0..(1usize << n) {
                let x = BitVec::from_bits((0..n).map(|i| mask >> i & 1 == 1));
                if a.mul_vec(&x) == b {
                    expected += 1;
                }
            }

            match gf2_solve(&a, &b).unwrap() {
                Gf2Solution::Inconsistent => assert_eq!(expected, 0),
                Gf2Solution::Unique(x) => {
                    assert_eq!(expected, 1);
                    assert_eq!(a.mul_vec(&x), b);
                }
                Gf2Solution::Affine {
                    particular,
                    kernel_basis,
                } => {
                    assert_eq!(expected, 1 << kernel_basis.len());
                    assert_eq!(a.mul_vec(&particular), b);
                    let zero = BitVec::zeros(m);
                    for v in &kernel_basis {
                        assert_eq!(a.mul_vec(v), zero);
                    }
                    // basis vectors are independent: distinct free columns
                    for (i, u) in kernel_basis.iter().enumerate() {
                        for v in kernel_basis.iter().skip(i + 1) {
                            assert_ne!(u, v);
                        }
                    }
                }
            }
        }
    }
}

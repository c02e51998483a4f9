//! Existence and uniqueness of rank-one completions over the reals.
//!
//! Splitting each observed value into magnitude and sign splits the problem
//! into two independent linear questions: the log-magnitude system over the
//! rationals and the sign system over GF(2). A real completion exists iff
//! both are consistent; with condition (A) the number of completions is
//! `2^k` where `k` is the GF(2) kernel dimension of the design matrix.
//!
//! Sign encoding: bit 0 stands for a positive component, bit 1 for a
//! negative one, and the right-hand side is 1 exactly on negative
//! observations. This keeps the pinned variables (bits 0) consistent with
//! the gauge components being +1. See the crate README for the sign
//! convention note.

use num_traits::Zero;

use crate::error::SolveError;
use crate::exact_linalg::{gf2_solve, BitVec, Gf2Matrix, Gf2Solution};
use crate::model::{
    rational_to_f64, sort_solutions, unit_power_product, FactorComponent, PartialTensor,
    PhaseTurns, RankOneFactors, Rational, SolutionCount, SolutionSet, ValueMode,
};
use crate::pattern::{build_design_matrix, design_rref, DesignMatrix};

/// Materialization cap: with a sign kernel of dimension above this, results
/// report the count and generators instead of listing `2^k` solutions.
pub const SIGN_ENUM_CAP: usize = 20;

/// Float-mode consistency tolerance for the magnitude system.
pub(crate) fn float_log_tolerance(q: &[f64]) -> f64 {
    let max_q = q.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    1e-8 * (1.0 + max_q)
}

/// One unknown of the magnitude system.
#[derive(Clone, Debug)]
pub struct MagnitudeAssignment {
    /// `log` of the component magnitude, evaluated in floating point.
    pub log_value: f64,
    /// Sparse rational exponents over the observations (canonical order):
    /// the magnitude equals `∏_e |Q_e|^{r_e}` exactly. `None` in float mode.
    pub exponents: Option<Vec<(usize, Rational)>>,
}

/// Exact (or float-tolerant) solution of the magnitude system.
#[derive(Clone, Debug)]
pub struct MagnitudeSolution {
    /// One assignment per design-matrix column; free variables are 0.
    pub assignments: Vec<MagnitudeAssignment>,
    /// Kernel basis of the design matrix; nonempty iff condition (A) fails.
    pub kernel_basis: Vec<Vec<Rational>>,
}

/// Outcome of the magnitude solve.
#[derive(Clone, Debug)]
pub enum MagnitudeOutcome {
    /// No magnitude assignment can reproduce the observations; `witness` is
    /// the row whose left-kernel combination failed.
    Inconsistent { witness: Option<usize> },
    Consistent(MagnitudeSolution),
}

/// Solves the log-magnitude system `Σ_k log|x^{(k)}_{i_k}| = log|Q_e|`.
///
/// In exact mode consistency is decided exactly: every row that reduces to
/// zero in the elimination carries a left-kernel combination `u`, and the
/// observation magnitudes must satisfy `∏ |Q_e|^{u_e} = 1` in rational
/// arithmetic. In float mode the system is solved by least squares and
/// accepted when the worst log-residual stays below
/// `1e-8 · (1 + max |log Q|)`.
pub fn solve_magnitudes(tensor: &PartialTensor) -> MagnitudeOutcome {
    let dm = build_design_matrix(tensor.pattern());
    solve_magnitudes_with(tensor, &dm)
}

pub(crate) fn solve_magnitudes_with(
    tensor: &PartialTensor,
    dm: &DesignMatrix,
) -> MagnitudeOutcome {
    match tensor.mode() {
        ValueMode::Exact => solve_magnitudes_exact(tensor, dm),
        ValueMode::Float => solve_magnitudes_float(tensor, dm),
    }
}

fn zero_solution(dm: &DesignMatrix) -> MagnitudeSolution {
    let assignments = (0..dm.unknowns())
        .map(|_| MagnitudeAssignment {
            log_value: 0.0,
            exponents: Some(Vec::new()),
        })
        .collect();
    let rref = design_rref(dm);
    let kernel_basis = if rref.is_full_column_rank() {
        Vec::new()
    } else {
        rref.kernel_basis()
    };
    MagnitudeSolution {
        assignments,
        kernel_basis,
    }
}

/// `dst − coeff · src` on sparse exponent vectors (sorted, no zeros).
fn sparse_sub_scaled(
    dst: &[(usize, Rational)],
    coeff: &Rational,
    src: &[(usize, Rational)],
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i >= dst.len() || src[j].0 < dst[i].0 {
            let v = -(coeff * &src[j].1);
            if !v.is_zero() {
                out.push((src[j].0, v));
            }
            j += 1;
        } else {
            let v = &dst[i].1 - &(coeff * &src[j].1);
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn solve_magnitudes_exact(tensor: &PartialTensor, dm: &DesignMatrix) -> MagnitudeOutcome {
    if tensor.has_unit_magnitudes() {
        // homogeneous system: q = 0, zero solution, no elimination needed
        return MagnitudeOutcome::Consistent(zero_solution(dm));
    }

    let mags: Vec<Rational> = dm
        .row_labels()
        .iter()
        .map(|idx| {
            tensor
                .exact_value(idx)
                .expect("exact mode")
                .magnitude()
                .clone()
        })
        .collect();
    let logs: Vec<f64> = dm
        .row_labels()
        .iter()
        .map(|idx| tensor.log_magnitude(idx))
        .collect();

    let n = dm.unknowns();
    let mut rref = crate::exact_linalg::RrefBuilder::new(n);
    // tags[i] expresses echelon row i as a combination of original rows
    let mut tags: Vec<Vec<(usize, Rational)>> = Vec::new();

    for (r, support) in (0..dm.m()).map(|r| (r, dm.row_support(r))) {
        let mut row = vec![Rational::zero(); n];
        for &c in support {
            row[c] = Rational::from_integer(1.into());
        }
        let mut tag = vec![(r, Rational::from_integer(1.into()))];
        for (i, coeff) in rref.reduce(&mut row) {
            tag = sparse_sub_scaled(&tag, &coeff, &tags[i]);
        }
        if row.iter().all(|x| x.is_zero()) {
            // left-kernel combination: the magnitudes must satisfy it
            if !unit_power_product(&mags, &tag) {
                return MagnitudeOutcome::Inconsistent { witness: Some(r) };
            }
        } else {
            let rec = rref.insert(row);
            if !num_traits::One::is_one(&rec.lead) {
                let inv = rec.lead.recip();
                for (_, v) in tag.iter_mut() {
                    *v *= &inv;
                }
            }
            for (i, coeff) in &rec.back_elims {
                tags[*i] = sparse_sub_scaled(&tags[*i], coeff, &tag);
            }
            tags.insert(rec.pos, tag);
        }
    }

    let mut assignments: Vec<MagnitudeAssignment> = (0..n)
        .map(|_| MagnitudeAssignment {
            log_value: 0.0,
            exponents: Some(Vec::new()),
        })
        .collect();
    for (i, &pc) in rref.pivot_cols().iter().enumerate() {
        let log_value = tags[i]
            .iter()
            .map(|(row, coeff)| rational_to_f64(coeff) * logs[*row])
            .sum();
        assignments[pc] = MagnitudeAssignment {
            log_value,
            exponents: Some(tags[i].clone()),
        };
    }
    let kernel_basis = if rref.is_full_column_rank() {
        Vec::new()
    } else {
        rref.kernel_basis()
    };
    MagnitudeOutcome::Consistent(MagnitudeSolution {
        assignments,
        kernel_basis,
    })
}

fn solve_magnitudes_float(tensor: &PartialTensor, dm: &DesignMatrix) -> MagnitudeOutcome {
    let q: Vec<f64> = dm
        .row_labels()
        .iter()
        .map(|idx| tensor.log_magnitude(idx))
        .collect();
    let x = crate::noisy_fit::least_squares_logs(dm, &q);
    let tol = float_log_tolerance(&q);
    let mut worst = 0.0f64;
    let mut witness = None;
    for (r, support) in (0..dm.m()).map(|r| (r, dm.row_support(r))) {
        let fitted: f64 = support.iter().map(|&c| x[c]).sum();
        let resid = (fitted - q[r]).abs();
        if resid > worst {
            worst = resid;
            witness = Some(r);
        }
    }
    if worst > tol {
        return MagnitudeOutcome::Inconsistent { witness };
    }
    let assignments = x
        .into_iter()
        .map(|log_value| MagnitudeAssignment {
            log_value,
            exponents: None,
        })
        .collect();
    let rref = design_rref(dm);
    let kernel_basis = if rref.is_full_column_rank() {
        Vec::new()
    } else {
        rref.kernel_basis()
    };
    MagnitudeOutcome::Consistent(MagnitudeSolution {
        assignments,
        kernel_basis,
    })
}

/// The GF(2) sign system of a real-valued tensor.
#[derive(Clone, Debug)]
pub struct SignSystem {
    /// Design matrix reduced mod 2.
    pub matrix: Gf2Matrix,
    /// Right-hand side: 1 exactly on negative observations.
    pub rhs: BitVec,
}

/// Builds the sign system; fails if some observed value is off the real axis.
pub fn build_sign_system(tensor: &PartialTensor) -> Result<SignSystem, SolveError> {
    let dm = build_design_matrix(tensor.pattern());
    build_sign_system_with(tensor, &dm)
}

pub(crate) fn build_sign_system_with(
    tensor: &PartialTensor,
    dm: &DesignMatrix,
) -> Result<SignSystem, SolveError> {
    if let Some(idx) = tensor.first_non_real() {
        return Err(SolveError::NonRealValue {
            index: idx.clone(),
            phase: tensor.phase(idx).to_string(),
        });
    }
    let matrix = dm.to_gf2();
    let rhs = BitVec::from_bits(
        dm.row_labels()
            .iter()
            .map(|idx| !tensor.phase(idx).is_zero()),
    );
    Ok(SignSystem { matrix, rhs })
}

/// Solver verdict over the reals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RealStatus {
    NoSolutionMagnitude,
    NoSolutionSign,
    Solutions,
}

/// Result of [`solve_real`].
#[derive(Clone, Debug)]
pub struct RealSolveResult {
    pub status: RealStatus,
    /// All real completions in canonical order (or a capped/infinite marker).
    pub solutions: SolutionSet,
    /// `0`, `2^k`, or infinite.
    pub count: SolutionCount,
    /// Generators of the sign-flip group (GF(2) kernel basis).
    pub sign_kernel: Vec<BitVec>,
    /// Kernel of the magnitude system; nonempty iff the family is infinite.
    pub magnitude_kernel: Vec<Vec<Rational>>,
}

impl RealSolveResult {
    fn no_solution(status: RealStatus) -> Self {
        RealSolveResult {
            status,
            solutions: SolutionSet::empty(),
            count: SolutionCount::finite(0),
            sign_kernel: Vec::new(),
            magnitude_kernel: Vec::new(),
        }
    }
}

/// Builds factors from per-column magnitude assignments and phases.
pub(crate) fn assemble_factors(
    dm: &DesignMatrix,
    magnitudes: &MagnitudeSolution,
    phase_of_column: impl Fn(usize) -> PhaseTurns,
) -> RankOneFactors {
    let dims = dm.dims();
    let d = dims.len();
    let mut vectors: Vec<Vec<FactorComponent>> = Vec::with_capacity(d);
    for (k, &n) in dims.iter().enumerate() {
        let mut vec_k = Vec::with_capacity(n);
        for i in 1..=n {
            match dm.column_of(k + 1, i) {
                None => vec_k.push(FactorComponent::unit()),
                Some(col) => {
                    let a = &magnitudes.assignments[col];
                    vec_k.push(FactorComponent {
                        magnitude: a.log_value.exp(),
                        magnitude_exponents: a.exponents.clone(),
                        phase: phase_of_column(col),
                    });
                }
            }
        }
        vectors.push(vec_k);
    }
    debug_assert!(d >= 2);
    RankOneFactors::new(vectors).expect("solver factors respect the gauge")
}

/// Decides existence and uniqueness over ℝ and enumerates the solutions.
///
/// All observed values must be real. When condition (A) fails but both
/// subsystems are consistent the family is infinite and one representative
/// is returned together with the magnitude kernel.
pub fn solve_real(tensor: &PartialTensor) -> Result<RealSolveResult, SolveError> {
    let dm = build_design_matrix(tensor.pattern());
    solve_real_with(tensor, &dm)
}

pub(crate) fn solve_real_with(
    tensor: &PartialTensor,
    dm: &DesignMatrix,
) -> Result<RealSolveResult, SolveError> {
    let sign_system = build_sign_system_with(tensor, dm)?;

    let magnitudes = match solve_magnitudes_with(tensor, dm) {
        MagnitudeOutcome::Inconsistent { .. } => {
            return Ok(RealSolveResult::no_solution(RealStatus::NoSolutionMagnitude));
        }
        MagnitudeOutcome::Consistent(sol) => sol,
    };

    let (particular, sign_kernel) = match gf2_solve(&sign_system.matrix, &sign_system.rhs)? {
        Gf2Solution::Inconsistent => {
            return Ok(RealSolveResult::no_solution(RealStatus::NoSolutionSign));
        }
        Gf2Solution::Unique(p) => (p, Vec::new()),
        Gf2Solution::Affine {
            particular,
            kernel_basis,
        } => (particular, kernel_basis),
    };

    let phases_from = |bits: &BitVec| {
        let owned = bits.clone();
        move |col: usize| {
            if owned.get(col) {
                PhaseTurns::half()
            } else {
                PhaseTurns::zero()
            }
        }
    };

    if !magnitudes.kernel_basis.is_empty() {
        let representative = assemble_factors(dm, &magnitudes, phases_from(&particular));
        return Ok(RealSolveResult {
            status: RealStatus::Solutions,
            solutions: SolutionSet::Infinite {
                representative: Box::new(representative),
            },
            count: SolutionCount::Infinite,
            magnitude_kernel: magnitudes.kernel_basis.clone(),
            sign_kernel,
        });
    }

    let k = sign_kernel.len();
    let count = SolutionCount::two_pow(k);
    if k > SIGN_ENUM_CAP {
        let base = assemble_factors(dm, &magnitudes, phases_from(&particular));
        return Ok(RealSolveResult {
            status: RealStatus::Solutions,
            solutions: SolutionSet::Capped {
                base: Box::new(base),
            },
            count,
            sign_kernel,
            magnitude_kernel: Vec::new(),
        });
    }

    let mut solutions = Vec::with_capacity(1 << k);
    for mask in 0u64..(1u64 << k) {
        let mut bits = particular.clone();
        for (i, g) in sign_kernel.iter().enumerate() {
            if mask >> i & 1 == 1 {
                bits.xor_assign(g);
            }
        }
        solutions.push(assemble_factors(dm, &magnitudes, phases_from(&bits)));
    }
    Ok(RealSolveResult {
        status: RealStatus::Solutions,
        solutions: SolutionSet::Finite(sort_solutions(solutions)),
        count,
        sign_kernel,
        magnitude_kernel: Vec::new(),
    })
}

//! Existence and global uniqueness of rank-one completions over ℂ.
//!
//! Writing each component as `|x|·e^{2πi·φ}` with `φ` in turns, the phase
//! part of the completion problem is the congruence system
//! `Σ_k φ^{(k)}_{i_k} ≡ arg(Q_e)  (mod 1)` over the design matrix. With
//! `U·A·V = D` the Smith normal form, the system is consistent iff the
//! rows of `U·t` beyond the rank are integers, and its solution set modulo
//! 1 is a coset of the torsion group `⊕ ℤ/d_i`: the number of completions
//! equals the product of the elementary divisors whenever condition (A)
//! holds. Global uniqueness over ℂ is therefore equivalent to all
//! elementary divisors being 1.
//!
//! The exponential-time enumeration over per-observation phase shifts
//! `σ_e ∈ {0, 1, …, d−1}` (turns) is kept as [`brute_force_sigma`], an
//! independent oracle for the Smith-normal-form path.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SolveError;
use crate::model::{
    sort_solutions, PartialTensor, PhaseTurns, RankOneFactors, Rational, SolutionCount,
    SolutionSet,
};
use crate::pattern::{build_design_matrix, DesignMatrix};
use crate::real_solver::{assemble_factors, solve_magnitudes_with, MagnitudeOutcome};

/// Materialization cap for complex solution sets.
pub const COMPLEX_ENUM_CAP: usize = 4096;

/// Default cap on `m` for the `3^m`-style brute-force oracle.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// The phase congruence system of a tensor.
#[derive(Clone, Debug)]
pub struct PhaseSystem {
    pub design: DesignMatrix,
    /// Right-hand side in turns, one entry per observation (canonical order).
    pub targets: Vec<PhaseTurns>,
}

/// Builds the phase system `A·φ ≡ t (mod 1)`.
pub fn build_phase_system(tensor: &PartialTensor) -> PhaseSystem {
    let design = build_design_matrix(tensor.pattern());
    let targets = design
        .row_labels()
        .iter()
        .map(|idx| tensor.phase(idx).clone())
        .collect();
    PhaseSystem { design, targets }
}

/// A generator of the finite phase kernel, of the given order.
#[derive(Clone, Debug)]
pub struct TorsionGenerator {
    /// Phase vector over the design columns.
    pub element: Vec<PhaseTurns>,
    pub order: BigUint,
}

/// Solution of the phase congruence system.
#[derive(Clone, Debug)]
pub enum PhaseSolution {
    Inconsistent,
    Solved(PhaseSolutionData),
}

#[derive(Clone, Debug)]
pub struct PhaseSolutionData {
    /// One particular solution, per design column.
    pub particular: Vec<PhaseTurns>,
    /// Generators of the finite kernel (one per elementary divisor > 1).
    pub generators: Vec<TorsionGenerator>,
    /// Continuous kernel directions (columns of `V` beyond the rank);
    /// nonempty exactly when condition (A) fails.
    pub free_directions: Vec<Vec<BigInt>>,
    /// Full Smith diagonal of the design matrix.
    pub divisors: Vec<BigInt>,
}

impl PhaseSolutionData {
    /// Order of the finite kernel: product of the nonzero divisors.
    pub fn torsion_order(&self) -> BigUint {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.magnitude().clone())
            .product()
    }
}

/// Solves `A·φ ≡ t (mod 1)` exactly via the Smith normal form.
pub fn solve_phase_system(ps: &PhaseSystem) -> PhaseSolution {
    let a = ps.design.to_int();
    let snf = crate::exact_linalg::integer_smith(&a);
    let m = ps.design.m();
    let n = ps.design.unknowns();
    let rank = snf.rank();

    // s = U · t
    let s: Vec<Rational> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| Rational::from_integer(snf.u.at(i, j).clone()) * ps.targets[j].as_turns())
                .sum()
        })
        .collect();

    // rows beyond the rank must be integral for consistency
    for si in s.iter().skip(rank) {
        if !si.denom().is_one() {
            return PhaseSolution::Inconsistent;
        }
    }

    // ψ_i = s_i / d_i on the diagonal block, 0 on free coordinates
    let mut psi = vec![Rational::zero(); n];
    for i in 0..rank.min(n) {
        psi[i] = &s[i] / Rational::from_integer(snf.divisors[i].clone());
    }

    // φ = V · ψ, reduced mod 1
    let particular: Vec<PhaseTurns> = (0..n)
        .map(|col| {
            let turns: Rational = (0..n)
                .map(|i| Rational::from_integer(snf.v.at(col, i).clone()) * &psi[i])
                .sum();
            PhaseTurns::new(turns)
        })
        .collect();

    let generators: Vec<TorsionGenerator> = (0..rank.min(n))
        .filter(|&i| !snf.divisors[i].is_one())
        .map(|i| {
            let d = snf.divisors[i].clone();
            let element = (0..n)
                .map(|col| {
                    PhaseTurns::new(Rational::new(snf.v.at(col, i).clone(), d.clone()))
                })
                .collect();
            TorsionGenerator {
                element,
                order: d.magnitude().clone(),
            }
        })
        .collect();

    let free_directions: Vec<Vec<BigInt>> = (rank..n)
        .map(|i| (0..n).map(|col| snf.v.at(col, i).clone()).collect())
        .collect();

    PhaseSolution::Solved(PhaseSolutionData {
        particular,
        generators,
        free_directions,
        divisors: snf.divisors,
    })
}

/// Solver verdict over ℂ.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComplexStatus {
    NoSolutionMagnitude,
    NoSolutionPhase,
    Solutions,
}

/// Result of [`count_complex`].
#[derive(Clone, Debug)]
pub struct ComplexSolveResult {
    pub status: ComplexStatus,
    /// All complex completions in canonical order (or a capped/infinite
    /// marker).
    pub solutions: SolutionSet,
    pub count: SolutionCount,
    /// Smith diagonal of the design matrix; under condition (A) the product
    /// of the divisors is the complex solution count.
    pub divisors: Vec<BigInt>,
    /// The full phase kernel (cosets of one solution to another), including
    /// zero, when its order is at most the cap; empty otherwise.
    pub kernel_elements: Vec<Vec<PhaseTurns>>,
    /// Generators of the phase kernel with their orders.
    pub kernel_generators: Vec<TorsionGenerator>,
}

fn add_phase_vectors(a: &[PhaseTurns], b: &[PhaseTurns]) -> Vec<PhaseTurns> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale_phase_vector(g: &[PhaseTurns], k: u64) -> Vec<PhaseTurns> {
    g.iter()
        .map(|p| PhaseTurns::new(p.as_turns() * Rational::from_integer(k.into())))
        .collect()
}

/// Enumerates the full torsion group from its generators; caller guarantees
/// the order fits `cap`.
fn enumerate_kernel(generators: &[TorsionGenerator], n: usize) -> Vec<Vec<PhaseTurns>> {
    let mut elements = vec![vec![PhaseTurns::zero(); n]];
    for g in generators {
        let order = g.order.to_u64().expect("order bounded by the cap");
        let mut next = Vec::with_capacity(elements.len() * order as usize);
        for e in &elements {
            for k in 0..order {
                next.push(add_phase_vectors(e, &scale_phase_vector(&g.element, k)));
            }
        }
        elements = next;
    }
    elements.sort_by(|a, b| {
        a.iter()
            .map(PhaseTurns::as_turns)
            .cmp(b.iter().map(PhaseTurns::as_turns))
    });
    elements
}

/// Counts and (below the cap) enumerates all rank-one completions over ℂ.
pub fn count_complex(tensor: &PartialTensor) -> ComplexSolveResult {
    let dm = build_design_matrix(tensor.pattern());
    count_complex_with(tensor, &dm)
}

pub(crate) fn count_complex_with(
    tensor: &PartialTensor,
    dm: &DesignMatrix,
) -> ComplexSolveResult {
    let targets: Vec<PhaseTurns> = dm
        .row_labels()
        .iter()
        .map(|idx| tensor.phase(idx).clone())
        .collect();
    let ps = PhaseSystem {
        design: dm.clone(),
        targets,
    };
    let phase = solve_phase_system(&ps);

    let magnitudes = match solve_magnitudes_with(tensor, dm) {
        MagnitudeOutcome::Inconsistent { .. } => {
            let divisors = match &phase {
                PhaseSolution::Solved(data) => data.divisors.clone(),
                PhaseSolution::Inconsistent => Vec::new(),
            };
            return ComplexSolveResult {
                status: ComplexStatus::NoSolutionMagnitude,
                solutions: SolutionSet::empty(),
                count: SolutionCount::finite(0),
                divisors,
                kernel_elements: Vec::new(),
                kernel_generators: Vec::new(),
            };
        }
        MagnitudeOutcome::Consistent(sol) => sol,
    };

    let data = match phase {
        PhaseSolution::Inconsistent => {
            // divisors are a pattern property; recompute them for the report
            let snf = crate::exact_linalg::integer_smith(&dm.to_int());
            return ComplexSolveResult {
                status: ComplexStatus::NoSolutionPhase,
                solutions: SolutionSet::empty(),
                count: SolutionCount::finite(0),
                divisors: snf.divisors,
                kernel_elements: Vec::new(),
                kernel_generators: Vec::new(),
            };
        }
        PhaseSolution::Solved(data) => data,
    };

    let assemble = |phases: &[PhaseTurns]| {
        assemble_factors(dm, &magnitudes, |col| phases[col].clone())
    };

    if !data.free_directions.is_empty() || !magnitudes.kernel_basis.is_empty() {
        let representative = assemble(&data.particular);
        return ComplexSolveResult {
            status: ComplexStatus::Solutions,
            solutions: SolutionSet::Infinite {
                representative: Box::new(representative),
            },
            count: SolutionCount::Infinite,
            divisors: data.divisors.clone(),
            kernel_elements: Vec::new(),
            kernel_generators: data.generators,
        };
    }

    let total = data.torsion_order();
    let count = SolutionCount::Finite(total.clone());
    if total > BigUint::from(COMPLEX_ENUM_CAP) {
        let base = assemble(&data.particular);
        return ComplexSolveResult {
            status: ComplexStatus::Solutions,
            solutions: SolutionSet::Capped {
                base: Box::new(base),
            },
            count,
            divisors: data.divisors.clone(),
            kernel_elements: Vec::new(),
            kernel_generators: data.generators,
        };
    }

    let kernel_elements = enumerate_kernel(&data.generators, dm.unknowns());
    let solutions: Vec<RankOneFactors> = kernel_elements
        .iter()
        .map(|e| assemble(&add_phase_vectors(&data.particular, e)))
        .collect();
    ComplexSolveResult {
        status: ComplexStatus::Solutions,
        solutions: SolutionSet::Finite(sort_solutions(solutions)),
        count,
        divisors: data.divisors.clone(),
        kernel_elements,
        kernel_generators: data.generators,
    }
}

/// A nontrivial phase-kernel element, when one exists.
///
/// Under condition (A) and consistency over ℂ, such an element composes
/// with any solution to give a second one, so `Some` is a proof of
/// non-uniqueness and `None` a proof of global uniqueness over ℂ.
pub fn non_uniqueness_witness(
    tensor: &PartialTensor,
) -> Result<Option<Vec<PhaseTurns>>, SolveError> {
    let dm = build_design_matrix(tensor.pattern());
    let report = crate::pattern::analyze_design(&dm);
    if !report.condition_a {
        return Err(SolveError::Precondition(format!(
            "condition (A) fails with {} degrees of freedom",
            report.dof
        )));
    }
    let result = count_complex_with(tensor, &dm);
    match result.status {
        ComplexStatus::Solutions => Ok(result
            .kernel_generators
            .first()
            .map(|g| g.element.clone())),
        _ => Err(SolveError::Precondition(
            "tensor has no rank-one completion over the complex numbers".into(),
        )),
    }
}

/// Precomputed exact row-echelon data for the σ enumeration: every pivot
/// variable is an integer functional of the right-hand side divided by a
/// fixed positive scale, and consistency is a list of integer functionals
/// that must vanish.
struct SigmaSolver {
    /// `(column, weights over observations, positive scale)`: the pivot
    /// variable equals `weights · b / scale`.
    pivots: Vec<(usize, Vec<BigInt>, BigInt)>,
    /// Integer left-kernel functionals; must annihilate the rhs.
    checks: Vec<Vec<BigInt>>,
    has_free_columns: bool,
}

fn build_sigma_solver(dm: &DesignMatrix) -> SigmaSolver {
    let n = dm.unknowns();
    let m = dm.m();
    let mut rref = crate::exact_linalg::RrefBuilder::new(n);
    let mut tags: Vec<Vec<Rational>> = Vec::new();
    let mut checks: Vec<Vec<BigInt>> = Vec::new();

    for r in 0..m {
        let mut row = vec![Rational::zero(); n];
        for &c in dm.row_support(r) {
            row[c] = Rational::one();
        }
        let mut tag = vec![Rational::zero(); m];
        tag[r] = Rational::one();
        for (i, coeff) in rref.reduce(&mut row) {
            for (t, s) in tag.iter_mut().zip(&tags[i]) {
                if !s.is_zero() {
                    *t -= &coeff * s;
                }
            }
        }
        if row.iter().all(|x| x.is_zero()) {
            checks.push(clear_denominators(&tag));
        } else {
            let rec = rref.insert(row);
            if !rec.lead.is_one() {
                let inv = rec.lead.recip();
                for t in tag.iter_mut() {
                    *t *= &inv;
                }
            }
            for (i, coeff) in &rec.back_elims {
                for c in 0..m {
                    if !tag[c].is_zero() {
                        let delta = coeff * &tag[c];
                        tags[*i][c] -= delta;
                    }
                }
            }
            tags.insert(rec.pos, tag);
        }
    }

    let has_free_columns = !rref.is_full_column_rank();
    let pivots = rref
        .pivot_cols()
        .iter()
        .zip(&tags)
        .map(|(&col, tag)| {
            let (weights, scale) = clear_denominators_scaled(tag);
            (col, weights, scale)
        })
        .collect();
    SigmaSolver {
        pivots,
        checks,
        has_free_columns,
    }
}

fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let (ints, _) = clear_denominators_scaled(v);
    ints
}

/// Multiplies by the lcm of denominators; returns (integers, positive lcm).
fn clear_denominators_scaled(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    (ints, lcm)
}

/// Enumerates all rank-one completions over ℂ by solving one exact linear
/// system per phase-shift assignment `σ ∈ ∏_e {0, …, w_e − 1}` (in turns),
/// where `w_e` is the number of unpinned variables in row `e`. A sum of
/// `w_e` phases in `[0, 1)` is below `w_e`, so larger shifts cannot yield
/// solutions with components in `[0, 1)`; for order-`d` tensors `w_e ≤ d`,
/// matching the `3^m` systems of the three-way case.
///
/// Independent of the Smith-normal-form path; serves as its oracle.
pub fn brute_force_sigma(tensor: &PartialTensor) -> Result<SolutionSet, SolveError> {
    brute_force_sigma_with_cap(tensor, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_sigma_with_cap(
    tensor: &PartialTensor,
    cap: usize,
) -> Result<SolutionSet, SolveError> {
    let m = tensor.pattern().m();
    if m > cap {
        return Err(SolveError::CapExceeded { m, cap });
    }
    let dm = build_design_matrix(tensor.pattern());

    let magnitudes = match solve_magnitudes_with(tensor, &dm) {
        MagnitudeOutcome::Inconsistent { .. } => return Ok(SolutionSet::empty()),
        MagnitudeOutcome::Consistent(sol) => sol,
    };

    let solver = build_sigma_solver(&dm);
    let targets: Vec<Rational> = dm
        .row_labels()
        .iter()
        .map(|idx| tensor.phase(idx).as_turns().clone())
        .collect();

    // per-row shift ranges: σ_e ∈ {0, …, weight_e − 1}
    let highs: Vec<u64> = (0..m).map(|r| dm.row_support(r).len() as u64 - 1).collect();

    // clear target denominators once: b = scale·t + scale·σ stays integral
    let (t_ints, scale) = clear_denominators_scaled(&targets);

    let mut sigma = vec![0u64; m];
    let mut phase_vectors: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut found_consistent_free = false;

    'enumerate: loop {
        // b = scale · (t + σ)
        let b: Vec<BigInt> = (0..m)
            .map(|r| &t_ints[r] + &scale * BigInt::from(sigma[r]))
            .collect();
        let consistent = solver
            .checks
            .iter()
            .all(|u| u.iter().zip(&b).map(|(x, y)| x * y).sum::<BigInt>().is_zero());
        if consistent {
            if solver.has_free_columns {
                // an affine family exists; reducing any member mod 1 solves
                // the congruence system, so the solution set is infinite
                found_consistent_free = true;
                break 'enumerate;
            }
            let mut phases = vec![Rational::zero(); dm.unknowns()];
            let mut in_box = true;
            for (col, weights, pivot_scale) in &solver.pivots {
                let num: BigInt = weights.iter().zip(&b).map(|(w, y)| w * y).sum();
                let denom = pivot_scale * &scale;
                if num.is_negative() || num >= denom {
                    in_box = false;
                    break;
                }
                phases[*col] = Rational::new(num, denom);
            }
            if in_box {
                phase_vectors.insert(phases);
            }
        }

        // odometer
        let mut k = m;
        loop {
            if k == 0 {
                break 'enumerate;
            }
            k -= 1;
            if sigma[k] < highs[k] {
                sigma[k] += 1;
                break;
            }
            sigma[k] = 0;
        }
    }

    if found_consistent_free {
        let particular = particular_from_free_case(&dm, &solver, &targets, &sigma);
        let representative = assemble_factors(&dm, &magnitudes, |col| particular[col].clone());
        return Ok(SolutionSet::Infinite {
            representative: Box::new(representative),
        });
    }

    let solutions: Vec<RankOneFactors> = phase_vectors
        .into_iter()
        .map(|phases| {
            assemble_factors(&dm, &magnitudes, |col| PhaseTurns::new(phases[col].clone()))
        })
        .collect();
    Ok(SolutionSet::Finite(sort_solutions(solutions)))
}

/// Particular solution (free variables zero, reduced mod 1) of the σ-system
/// found consistent in the degenerate case.
fn particular_from_free_case(
    dm: &DesignMatrix,
    solver: &SigmaSolver,
    targets: &[Rational],
    sigma: &[u64],
) -> Vec<PhaseTurns> {
    let b: Vec<Rational> = targets
        .iter()
        .zip(sigma)
        .map(|(t, &s)| t + Rational::from_integer(s.into()))
        .collect();
    let mut phases = vec![PhaseTurns::zero(); dm.unknowns()];
    for (col, weights, pivot_scale) in &solver.pivots {
        let num: Rational = weights
            .iter()
            .zip(&b)
            .map(|(w, y)| Rational::from_integer(w.clone()) * y)
            .sum();
        phases[*col] = PhaseTurns::new(num / Rational::from_integer(pivot_scale.clone()));
    }
    phases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_slice_text, rat, MultiIndex};

    pub(crate) const TABLE1: &str = "\
1 1 1 | 1 * * | 1 * *
1 * * | * * * | * * *
1 * * | * * * | * * *";
    pub(crate) const TABLE2: &str = "\
1 1 * | 1 * * | * * 1
1 * * | * * * | * * *
* * 1 | * * * | 1 * *";
    pub(crate) const TABLE3: &str = "\
1 * * | * * 1 | * 1 *
1 * * | * * * | * * *
* 1 * | 1 * * | * * 1";
    pub(crate) const TABLE4: &str = "\
-1 * 1 | * * * | * * *
 1 * * | * * * | * 1 *
 * 1 * | 1 * * | * * 1";

    fn divisors_i64(divisors: &[BigInt]) -> Vec<i64> {
        divisors
            .iter()
            .map(|d| i64::try_from(d).expect("small divisor"))
            .collect()
    }

    fn phases_of(sol: &RankOneFactors, mode: usize) -> Vec<Rational> {
        (1..=sol.dims()[mode])
            .map(|i| sol.component(mode, i).phase.as_turns().clone())
            .collect()
    }

    #[test]
    fn zero_targets_are_always_consistent() {
        let t = parse_slice_text(TABLE3).unwrap();
        let ps = build_phase_system(&t);
        match solve_phase_system(&ps) {
            PhaseSolution::Solved(data) => {
                assert!(data.particular.iter().all(PhaseTurns::is_zero));
                assert_eq!(data.torsion_order(), BigUint::from(3u32));
            }
            PhaseSolution::Inconsistent => panic!("zero target must be consistent"),
        }
    }

    #[test]
    fn table_divisors() {
        for (text, want) in [
            (TABLE1, vec![1, 1, 1, 1, 1, 1, 1]),
            (TABLE2, vec![1, 1, 1, 1, 1, 1, 2]),
            (TABLE3, vec![1, 1, 1, 1, 1, 1, 3]),
            (TABLE4, vec![1, 1, 1, 1, 1, 1, 2]),
        ] {
            let t = parse_slice_text(text).unwrap();
            let res = count_complex(&t);
            assert_eq!(divisors_i64(&res.divisors), want);
        }
    }

    #[test]
    fn table1_globally_unique() {
        let t = parse_slice_text(TABLE1).unwrap();
        let res = count_complex(&t);
        assert_eq!(res.status, ComplexStatus::Solutions);
        assert!(res.count.is_one());
        assert!(res.kernel_generators.is_empty());
        assert_eq!(non_uniqueness_witness(&t).unwrap(), None);
    }

    #[test]
    fn table3_has_three_complex_solutions() {
        let t = parse_slice_text(TABLE3).unwrap();
        let res = count_complex(&t);
        assert_eq!(res.count, SolutionCount::finite(3));
        let SolutionSet::Finite(sols) = &res.solutions else {
            panic!("expected finite set");
        };
        assert_eq!(sols.len(), 3);
        // canonical order: all-ones, then phases 1/3, then 2/3
        assert!(sols[0].phase_key().iter().all(|p| p.is_zero()));
        assert_eq!(phases_of(&sols[1], 0), vec![rat(0, 1), rat(0, 1), rat(1, 3)]);
        assert_eq!(phases_of(&sols[1], 1), vec![rat(0, 1), rat(2, 3), rat(1, 3)]);
        assert_eq!(phases_of(&sols[1], 2), vec![rat(0, 1), rat(2, 3), rat(1, 3)]);
        assert_eq!(phases_of(&sols[2], 0), vec![rat(0, 1), rat(0, 1), rat(2, 3)]);
        assert_eq!(phases_of(&sols[2], 1), vec![rat(0, 1), rat(1, 3), rat(2, 3)]);
        assert_eq!(phases_of(&sols[2], 2), vec![rat(0, 1), rat(1, 3), rat(2, 3)]);
        // witness has third-turn phases
        let witness = non_uniqueness_witness(&t).unwrap().expect("not unique");
        assert!(witness
            .iter()
            .any(|p| p.as_turns() == &rat(1, 3) || p.as_turns() == &rat(2, 3)));
        // the kernel is a group of order 3 containing zero
        assert_eq!(res.kernel_elements.len(), 3);
        assert!(res.kernel_elements[0].iter().all(PhaseTurns::is_zero));
    }

    #[test]
    fn table4_solutions_match_the_listing() {
        let t = parse_slice_text(TABLE4).unwrap();
        let res = count_complex(&t);
        assert_eq!(res.status, ComplexStatus::Solutions);
        assert_eq!(res.count, SolutionCount::finite(2));
        let SolutionSet::Finite(sols) = &res.solutions else {
            panic!("expected finite set");
        };
        // first listed solution: a = (1, -1, i), b = (1, i, -1),
        // c = (-1, e^{3iπ/2}, i) in turns:
        assert_eq!(phases_of(&sols[0], 0), vec![rat(0, 1), rat(1, 2), rat(1, 4)]);
        assert_eq!(phases_of(&sols[0], 1), vec![rat(0, 1), rat(1, 4), rat(1, 2)]);
        assert_eq!(phases_of(&sols[0], 2), vec![rat(1, 2), rat(3, 4), rat(1, 4)]);
        // second is the conjugate
        assert_eq!(phases_of(&sols[1], 0), vec![rat(0, 1), rat(1, 2), rat(3, 4)]);
        assert_eq!(phases_of(&sols[1], 1), vec![rat(0, 1), rat(3, 4), rat(1, 2)]);
        assert_eq!(phases_of(&sols[1], 2), vec![rat(1, 2), rat(1, 4), rat(3, 4)]);
        // all solutions reproduce the observations exactly
        for sol in sols {
            for idx in t.pattern().indices() {
                let v = sol.evaluate(idx);
                assert_eq!(v.phase(), t.phase(idx), "phase mismatch at {idx}");
                assert!((v.magnitude() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn table2_has_no_extra_complex_solutions() {
        let t = parse_slice_text(TABLE2).unwrap();
        let res = count_complex(&t);
        assert_eq!(res.count, SolutionCount::finite(2));
        let brute = brute_force_sigma(&t).unwrap();
        let SolutionSet::Finite(brute_sols) = brute else {
            panic!("expected finite set");
        };
        assert_eq!(brute_sols.len(), 2);
        // both are real: phases in {0, 1/2}
        for sol in &brute_sols {
            assert!(sol.is_real());
        }
    }

    #[test]
    fn brute_force_matches_snf_on_the_tables() {
        for (text, want) in [(TABLE1, 1usize), (TABLE2, 2), (TABLE3, 3), (TABLE4, 2)] {
            let t = parse_slice_text(text).unwrap();
            let res = count_complex(&t);
            let brute = brute_force_sigma(&t).unwrap();
            let SolutionSet::Finite(brute_sols) = brute else {
                panic!("expected finite set");
            };
            assert_eq!(brute_sols.len(), want);
            assert_eq!(res.count.to_usize(), Some(want));
            let SolutionSet::Finite(fast_sols) = &res.solutions else {
                panic!("expected finite set");
            };
            for (a, b) in fast_sols.iter().zip(&brute_sols) {
                assert_eq!(a.phase_key(), b.phase_key(), "solution sets differ on {text}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let t = parse_slice_text(TABLE1).unwrap();
        assert!(matches!(
            brute_force_sigma_with_cap(&t, 3),
            Err(SolveError::CapExceeded { m: 7, cap: 3 })
        ));
    }

    #[test]
    fn inconsistent_magnitudes_give_empty_set() {
        let t = parse_slice_text("1 2 | 3 7 | * *").unwrap();
        let res = count_complex(&t);
        assert_eq!(res.status, ComplexStatus::NoSolutionMagnitude);
        assert!(res.count.is_zero());
        let brute = brute_force_sigma(&t).unwrap();
        assert_eq!(brute.len_finite(), Some(0));
    }

    #[test]
    fn degenerate_pattern_is_infinite_both_ways() {
        let t = PartialTensor::from_exact(
            vec![2, 2, 2],
            [(
                MultiIndex::new(vec![1, 1, 1]),
                crate::model::PolarScalar::from_real(&rat(2, 1)).unwrap(),
            )],
        )
        .unwrap();
        let res = count_complex(&t);
        assert_eq!(res.count, SolutionCount::Infinite);
        assert!(matches!(res.solutions, SolutionSet::Infinite { .. }));
        assert!(matches!(
            brute_force_sigma(&t).unwrap(),
            SolutionSet::Infinite { .. }
        ));
        assert!(non_uniqueness_witness(&t).is_err());
    }

    #[test]
    fn real_solutions_embed_into_complex() {
        for text in [TABLE1, TABLE2, TABLE4] {
            let t = parse_slice_text(text).unwrap();
            let real = crate::real_solver::solve_real(&t).unwrap();
            let complex = count_complex(&t);
            let real_keys: Vec<_> = match &real.solutions {
                SolutionSet::Finite(sols) => sols.iter().map(|s| s.phase_key()).collect(),
                _ => panic!("expected finite"),
            };
            let complex_keys: Vec<_> = match &complex.solutions {
                SolutionSet::Finite(sols) => sols.iter().map(|s| s.phase_key()).collect(),
                _ => panic!("expected finite"),
            };
            for key in &real_keys {
                assert!(complex_keys.contains(key), "real solution missing over ℂ");
            }
            assert!(real_keys.len() <= complex_keys.len());
        }
    }

    #[test]
    fn conjugating_observations_conjugates_solutions() {
        let t = parse_slice_text(TABLE4).unwrap();
        let res = count_complex(&t);
        let conj_res = count_complex(&t.conjugated());
        let SolutionSet::Finite(sols) = &res.solutions else {
            panic!()
        };
        let SolutionSet::Finite(conj_sols) = &conj_res.solutions else {
            panic!()
        };
        assert_eq!(sols.len(), conj_sols.len());
        let mut mapped: Vec<_> = sols.iter().map(|s| s.conjugated().phase_key()).collect();
        mapped.sort();
        let keys: Vec<_> = conj_sols.iter().map(|s| s.phase_key()).collect();
        assert_eq!(mapped, keys);
    }

    #[test]
    fn kernel_elements_form_a_group() {
        let t = parse_slice_text(TABLE3).unwrap();
        let res = count_complex(&t);
        let elems: BTreeSet<Vec<Rational>> = res
            .kernel_elements
            .iter()
            .map(|e| e.iter().map(|p| p.as_turns().clone()).collect())
            .collect();
        assert!(elems.contains(&vec![Rational::zero(); 7]));
        for a in &res.kernel_elements {
            for b in &res.kernel_elements {
                let sum: Vec<Rational> = add_phase_vectors(a, b)
                    .iter()
                    .map(|p| p.as_turns().clone())
                    .collect();
                assert!(elems.contains(&sum), "kernel not closed under addition");
            }
        }
    }
}

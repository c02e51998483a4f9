//! Rank-one approximation of noisy positive observations by log-domain
//! least squares, plus seeded noisy-tensor generation.
//!
//! With strictly positive observations, `min Σ (log Q_e − Σ_k x^{(k)})²`
//! is an ordinary least-squares problem over the design matrix; condition
//! (A) makes the normal equations positive definite and the minimizer
//! unique. The fitted factors are the componentwise exponentials of the
//! minimizer.

use std::collections::BTreeMap;

use crate::error::FitError;
use crate::model::{
    FloatValue, MultiIndex, ObservationPattern, PartialTensor, PhaseTurns, PolarScalar,
    RankOneFactors, Rational,
};
use crate::pattern::{analyze_design, build_design_matrix, DesignMatrix};
use crate::real_solver::{MagnitudeAssignment, MagnitudeSolution};

/// Result of a log-domain least-squares fit.
#[derive(Clone, Debug)]
pub struct FitResult {
    /// Fitted factors in the standard gauge; phases are all zero.
    pub factors: RankOneFactors,
    /// Sum of squared log-residuals at the minimizer.
    pub objective: f64,
    /// `log Q_e − log Q̂_e` per observation.
    pub residuals: BTreeMap<MultiIndex, f64>,
    /// First-order estimate of the relative disturbance `ε_e / Q*_e`,
    /// computed as `Q_e / Q̂_e − 1`.
    pub relative_disturbances: BTreeMap<MultiIndex, f64>,
}

/// Noise model for synthetic observations: i.i.d. symmetric uniform draws.
#[derive(Clone, Copy, Debug)]
pub struct NoiseSpec {
    /// Half-width of the uniform interval; must stay below the smallest
    /// true value so that noisy observations remain positive.
    pub amplitude: f64,
    pub seed: u64,
    pub distribution: NoiseDistribution,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum NoiseDistribution {
    #[default]
    UniformSymmetric,
}

impl NoiseSpec {
    pub fn uniform(amplitude: f64, seed: u64) -> Self {
        NoiseSpec {
            amplitude,
            seed,
            distribution: NoiseDistribution::UniformSymmetric,
        }
    }
}

/// SplitMix64: the fixed, portable generator behind [`generate_noisy`].
///
/// Uniform draws map the high 53 bits of each output word to `[0, 1)`, so
/// generated fixtures are bit-reproducible across platforms and languages.
pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the high 53 bits.
    pub(crate) fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Solves the normal equations `AᵀA x = Aᵀ q` of the design matrix.
///
/// Under condition (A) the Gram matrix is positive definite and a dense
/// Cholesky factorization applies; otherwise a pivoted elimination zeroes
/// the free variables, which is enough for residual tests on degenerate
/// patterns.
pub(crate) fn least_squares_logs(dm: &DesignMatrix, q: &[f64]) -> Vec<f64> {
    let n = dm.unknowns();
    let mut gram = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    for r in 0..dm.m() {
        let support = dm.row_support(r);
        for &c1 in support {
            rhs[c1] += q[r];
            for &c2 in support {
                gram[c1][c2] += 1.0;
            }
        }
    }
    cholesky_solve(&gram, &rhs).unwrap_or_else(|| pivoted_solve(gram, rhs))
}

fn cholesky_solve(g: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 1e-12 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // forward then backward substitution
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

/// Gaussian elimination with partial pivoting; near-zero pivots leave the
/// variable at zero. Deterministic.
fn pivoted_solve(mut g: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut row = 0usize;
    for col in 0..n {
        let Some(best) = (row..n)
            .filter(|&r| g[r][col].abs() > 1e-9)
            .max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs()))
        else {
            continue;
        };
        g.swap(row, best);
        b.swap(row, best);
        let pivot = g[row][col];
        for r in 0..n {
            if r != row && g[r][col].abs() > 0.0 {
                let f = g[r][col] / pivot;
                for c in col..n {
                    g[r][c] -= f * g[row][c];
                }
                b[r] -= f * b[row];
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut x = vec![0.0f64; n];
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            x[col] = b[r] / g[r][col];
        }
    }
    x
}

fn check_positive(tensor: &PartialTensor) -> Result<(), FitError> {
    for idx in tensor.pattern().indices() {
        if !tensor.phase(idx).is_zero() {
            return Err(FitError::NonPositiveValue { index: idx.clone() });
        }
    }
    Ok(())
}

/// Fits rank-one factors to strictly positive observations by minimizing
/// the sum of squared log-residuals (normal equations, exact design
/// structure). Requires condition (A).
pub fn fit_least_squares(tensor: &PartialTensor) -> Result<FitResult, FitError> {
    check_positive(tensor)?;
    let dm = build_design_matrix(tensor.pattern());
    let report = analyze_design(&dm);
    if !report.condition_a {
        return Err(FitError::ConditionAViolated { dof: report.dof });
    }

    let q: Vec<f64> = dm
        .row_labels()
        .iter()
        .map(|idx| tensor.log_magnitude(idx))
        .collect();
    let x = least_squares_logs(&dm, &q);

    let assignments = x
        .iter()
        .map(|&log_value| MagnitudeAssignment {
            log_value,
            exponents: None,
        })
        .collect();
    let solution = MagnitudeSolution {
        assignments,
        kernel_basis: Vec::new(),
    };
    let factors =
        crate::real_solver::assemble_factors(&dm, &solution, |_| PhaseTurns::zero());

    let mut residuals = BTreeMap::new();
    let mut relative = BTreeMap::new();
    let mut objective = 0.0f64;
    for (r, idx) in dm.row_labels().iter().enumerate() {
        let fitted: f64 = dm.row_support(r).iter().map(|&c| x[c]).sum();
        let res = q[r] - fitted;
        objective += res * res;
        residuals.insert(idx.clone(), res);
        relative.insert(idx.clone(), res.exp_m1());
    }

    Ok(FitResult {
        factors,
        objective,
        residuals,
        relative_disturbances: relative,
    })
}

/// Adds seeded symmetric uniform noise to the rank-one tensor defined by
/// `factors`, observed on `pattern`.
///
/// Draws are made in the canonical observation order, one per observation,
/// using SplitMix64. With amplitude 0 the result is an exact-mode tensor
/// (float values convert to rationals exactly); otherwise float mode.
pub fn generate_noisy(
    factors: &RankOneFactors,
    pattern: &ObservationPattern,
    noise: &NoiseSpec,
) -> Result<PartialTensor, FitError> {
    assert_eq!(
        factors.dims(),
        pattern.dims(),
        "factor dims must match the pattern"
    );
    let truth: Vec<(MultiIndex, f64)> = pattern
        .indices()
        .map(|idx| {
            let v = factors.evaluate(idx);
            assert!(
                v.phase().is_zero(),
                "generate_noisy requires positive factors"
            );
            (idx.clone(), v.magnitude())
        })
        .collect();
    let min_value = truth.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    if !(noise.amplitude >= 0.0) || noise.amplitude >= min_value {
        return Err(FitError::AmplitudeTooLarge {
            amplitude: noise.amplitude,
            min_value,
        });
    }

    if noise.amplitude == 0.0 {
        let entries = truth.into_iter().map(|(idx, v)| {
            let exact = Rational::from_float(v).expect("finite value");
            (
                idx,
                PolarScalar::new(exact, PhaseTurns::zero()).expect("positive value"),
            )
        });
        return Ok(PartialTensor::from_exact(pattern.dims().to_vec(), entries)
            .expect("pattern already validated"));
    }

    let mut rng = SplitMix64::new(noise.seed);
    let entries = truth.into_iter().map(|(idx, v)| {
        let eps = (2.0 * rng.next_unit() - 1.0) * noise.amplitude;
        (
            idx,
            FloatValue::new(v + eps, PhaseTurns::zero()).expect("amplitude below minimum"),
        )
    });
    Ok(PartialTensor::from_float(pattern.dims().to_vec(), entries)
        .expect("pattern already validated"))
}

/// Componentwise comparison of a fit against known true factors.
#[derive(Clone, Copy, Debug)]
pub struct FitQuality {
    /// Worst relative error over all factor components (after both sides
    /// are renormalized to the standard gauge).
    pub max_factor_rel_error: f64,
    /// Worst relative error over all entries of the full reconstructed
    /// tensor.
    pub max_entry_rel_error: f64,
}

/// Measures fit quality against true positive factors; both sides are
/// brought to the standard gauge first, so any `λ_1·λ_2·…·λ_d = 1`
/// rescaling of the truth yields the same report.
pub fn fit_quality(fit: &FitResult, truth: &RankOneFactors) -> FitQuality {
    let dims = truth.dims();
    assert_eq!(fit.factors.dims(), dims, "factor shapes must agree");
    let truth_gauged = RankOneFactors::from_positive(
        truth
            .vectors()
            .iter()
            .map(|v| v.iter().map(|c| c.magnitude).collect())
            .collect(),
    )
    .expect("true factors must be positive");

    let mut max_factor = 0.0f64;
    for (mode, _) in dims.iter().enumerate() {
        for i in 1..=dims[mode] {
            let a = fit.factors.component(mode, i).magnitude;
            let b = truth_gauged.component(mode, i).magnitude;
            max_factor = max_factor.max((a - b).abs() / b.abs());
        }
    }

    let mut max_entry = 0.0f64;
    let mut stack = vec![1usize; dims.len()];
    loop {
        let idx = MultiIndex::new(stack.clone());
        let a = fit.factors.evaluate(&idx).magnitude();
        let b = truth_gauged.evaluate(&idx).magnitude();
        max_entry = max_entry.max((a - b).abs() / b.abs());
        // advance the odometer
        let mut k = dims.len();
        loop {
            if k == 0 {
                return FitQuality {
                    max_factor_rel_error: max_factor,
                    max_entry_rel_error: max_entry,
                };
            }
            k -= 1;
            if stack[k] < dims[k] {
                stack[k] += 1;
                break;
            }
            stack[k] = 1;
        }
    }
}

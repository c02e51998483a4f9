//! Command-line front end: parse partial tensors, decide existence and
//! uniqueness of rank-one completions over ℝ and ℂ, enumerate solutions,
//! fit noisy positive data, and cross-check the fast solvers against the
//! brute-force oracles.
//!
//! Exit codes: 0 success; 1 oracle mismatch; 2 parse/format errors;
//! 3 no solution over the requested field; 4 fit precondition failure;
//! 5 brute-force cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rankone_core::complex_solver::{
    brute_force_sigma_with_cap, count_complex, ComplexSolveResult, ComplexStatus,
    DEFAULT_ORACLE_CAP,
};
use rankone_core::error::{FitError, ModelError, SolveError};
use rankone_core::model::{
    format_rational, parse_json, parse_slice_text, to_json, MultiIndex, ObservationPattern,
    PartialTensor, RankOneFactors, SolutionSet,
};
use rankone_core::noisy_fit::{fit_least_squares, generate_noisy, FitResult, NoiseSpec};
use rankone_core::pattern::{analyze_pattern, build_design_matrix, PatternReport};
use rankone_core::real_solver::{solve_real, RealSolveResult, RealStatus};
use rankone_core::report;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "rankone",
    version,
    about = "Existence, uniqueness, and enumeration of rank-one tensor completions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Field {
    Real,
    Complex,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Report condition (A), degrees of freedom, and solution counts.
    Analyze {
        input: PathBuf,
        /// Which field(s) to analyze.
        #[arg(long, value_enum, default_value_t = Field::Both)]
        field: Field,
        /// Emit the machine-readable JSON report.
        #[arg(long)]
        json: bool,
    },
    /// List all rank-one completions over the requested field.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Field::Complex)]
        field: Field,
        /// Print exact exponent forms of the solution magnitudes.
        #[arg(long)]
        exact: bool,
        /// Cap the number of listed solutions.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Fit rank-one factors to positive observations by log least squares.
    Fit {
        input: PathBuf,
        /// Also print the full reconstructed tensor.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write a synthetic (optionally noisy) rank-one tensor as JSON.
    Generate {
        /// Tensor dims, e.g. `3,3,3`.
        #[arg(long)]
        dims: String,
        /// Use all-ones factors.
        #[arg(long)]
        ones: bool,
        /// Positive factors, semicolon-separated modes: `1,2;1,0.5,3`.
        #[arg(long)]
        factors: Option<String>,
        /// Pattern: `full`, `table1`..`table5`, `random:<m>`,
        /// `density:<p>`, or an explicit `i,j,k;i,j,k;…` list.
        #[arg(long, default_value = "full")]
        pattern: String,
        /// Noise amplitude (uniform on [-amp, amp]).
        #[arg(long, default_value_t = 0.0)]
        amp: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the fast solvers against the brute-force enumerations.
    Oracle { input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze { input, field, json } => cmd_analyze(&input, field, json),
        Command::Solve {
            input,
            field,
            exact,
            limit,
            json,
        } => cmd_solve(&input, field, exact, limit, json),
        Command::Fit { input, full, json } => cmd_fit(&input, full, json),
        Command::Generate {
            dims,
            ones,
            factors,
            pattern,
            amp,
            seed,
            out,
        } => cmd_generate(&dims, ones, factors.as_deref(), &pattern, amp, seed, out.as_deref()),
        Command::Oracle { input } => cmd_oracle(&input),
    };
    match code {
        Ok(c) => c,
        Err(e) => e.report(),
    }
}

/// CLI failure carrying its exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn report(self) -> ExitCode {
        eprintln!("error: {}", self.message);
        ExitCode::from(self.code)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(2, e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::CapExceeded { .. } => CliError::new(5, e.to_string()),
            _ => CliError::new(2, e.to_string()),
        }
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> Self {
        CliError::new(4, e.to_string())
    }
}

fn load_tensor(path: &Path) -> Result<PartialTensor, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))?;
    let tensor = if text.trim_start().starts_with('{') {
        parse_json(&text)?
    } else {
        parse_slice_text(&text)?
    };
    Ok(tensor)
}

fn dims_text(dims: &[usize]) -> String {
    dims.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("×")
}

fn print_pattern_line(report: &PatternReport, dims: &[usize]) {
    println!(
        "pattern: dims {}, m = {}, unknowns = {}, rank = {}",
        dims_text(dims),
        report.m,
        report.unknowns,
        report.rank
    );
    println!(
        "condition (A): {} (dof = {}), overdetermined: {}",
        if report.condition_a {
            "satisfied"
        } else {
            "violated"
        },
        report.dof,
        if report.overdetermined { "yes" } else { "no" }
    );
}

fn cmd_analyze(input: &Path, field: Field, json: bool) -> Result<ExitCode, CliError> {
    let tensor = load_tensor(input)?;
    let pattern_report = analyze_pattern(tensor.pattern());

    let want_real = matches!(field, Field::Real | Field::Both);
    let want_complex = matches!(field, Field::Complex | Field::Both);

    let real = if want_real {
        if tensor.is_real() {
            Some(RealOrNa::Result(solve_real(&tensor)?))
        } else {
            Some(RealOrNa::NotApplicable)
        }
    } else {
        None
    };
    let complex = want_complex.then(|| count_complex(&tensor));

    if json {
        let real_value = real.as_ref().map(|r| match r {
            RealOrNa::Result(res) => report::real_json(res),
            RealOrNa::NotApplicable => report::real_not_applicable(),
        });
        let complex_value = complex.as_ref().map(report::complex_json);
        let doc = report::report_json(
            report::pattern_json(&pattern_report),
            real_value,
            complex_value,
            None,
            &input.display().to_string(),
            tensor.mode(),
            VERSION,
        );
        print!("{}", report::render(&doc));
        return Ok(ExitCode::SUCCESS);
    }

    print_pattern_line(&pattern_report, tensor.pattern().dims());
    if let Some(real) = &real {
        match real {
            RealOrNa::Result(res) => println!(
                "real:    {} ({}, sign kernel dimension {})",
                plural(&res.count.to_string(), "solution"),
                report::real_status_str(res.status),
                res.sign_kernel.len()
            ),
            RealOrNa::NotApplicable => {
                println!("real:    not applicable (observed values are not all real)")
            }
        }
    }
    if let Some(res) = &complex {
        println!(
            "complex: {} ({}); elementary divisors [{}]",
            plural(&res.count.to_string(), "solution"),
            report::complex_status_str(res.status),
            res.divisors
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    Ok(ExitCode::SUCCESS)
}

enum RealOrNa {
    Result(RealSolveResult),
    NotApplicable,
}

fn plural(count: &str, noun: &str) -> String {
    if count == "1" {
        format!("{count} {noun}")
    } else {
        format!("{count} {noun}s")
    }
}

fn print_factors(factors: &RankOneFactors, exact: bool, tensor: &PartialTensor) {
    let dm = exact.then(|| build_design_matrix(tensor.pattern()));
    for (mode, vec) in factors.vectors().iter().enumerate() {
        let rendered: Vec<String> = vec.iter().map(report::component_notation).collect();
        println!("  mode {}: {}", mode + 1, rendered.join(", "));
        if let Some(dm) = &dm {
            for (i, c) in vec.iter().enumerate() {
                let Some(exps) = &c.magnitude_exponents else {
                    continue;
                };
                if exps.is_empty() {
                    continue;
                }
                let product: Vec<String> = exps
                    .iter()
                    .map(|(row, coeff)| {
                        format!(
                            "|Q{}|^({})",
                            dm.row_labels()[*row],
                            format_rational(coeff)
                        )
                    })
                    .collect();
                println!(
                    "           [{}] magnitude = {}",
                    i + 1,
                    product.join("·")
                );
            }
        }
    }
}

fn cmd_solve(
    input: &Path,
    field: Field,
    exact: bool,
    limit: Option<usize>,
    json: bool,
) -> Result<ExitCode, CliError> {
    let tensor = load_tensor(input)?;
    let (status_str, count, solutions) = match field {
        Field::Real => {
            let res = solve_real(&tensor)?;
            if res.count.is_zero() {
                let detail = match res.status {
                    RealStatus::NoSolutionMagnitude => "the magnitude system is inconsistent",
                    RealStatus::NoSolutionSign => "the sign system is inconsistent",
                    RealStatus::Solutions => unreachable!("zero count with solutions"),
                };
                return Err(CliError::new(
                    3,
                    format!("no real rank-one completion: {detail}"),
                ));
            }
            (
                report::real_status_str(res.status),
                res.count.clone(),
                res.solutions,
            )
        }
        Field::Complex | Field::Both => {
            let res = count_complex(&tensor);
            if res.count.is_zero() {
                let detail = match res.status {
                    ComplexStatus::NoSolutionMagnitude => "the magnitude system is inconsistent",
                    ComplexStatus::NoSolutionPhase => "the phase system is inconsistent",
                    ComplexStatus::Solutions => unreachable!("zero count with solutions"),
                };
                return Err(CliError::new(
                    3,
                    format!("no complex rank-one completion: {detail}"),
                ));
            }
            (
                report::complex_status_str(res.status),
                res.count.clone(),
                res.solutions,
            )
        }
    };

    if json {
        let dm = exact.then(|| build_design_matrix(tensor.pattern()));
        let doc = report::solve_json(status_str, &count, &solutions, limit, dm.as_ref());
        print!("{}", report::render(&doc));
        return Ok(ExitCode::SUCCESS);
    }

    match &solutions {
        SolutionSet::Finite(sols) => {
            println!("{}", plural(&count.to_string(), "solution"));
            let shown = limit.unwrap_or(sols.len()).min(sols.len());
            for (i, sol) in sols[..shown].iter().enumerate() {
                println!("solution {} of {}:", i + 1, sols.len());
                print_factors(sol, exact, &tensor);
            }
            if shown < sols.len() {
                println!("… {} more not shown (--limit)", sols.len() - shown);
            }
        }
        SolutionSet::Capped { base } => {
            println!(
                "{} (above the materialization cap); one solution shown:",
                plural(&count.to_string(), "solution")
            );
            print_factors(base, exact, &tensor);
        }
        SolutionSet::Infinite { representative } => {
            println!("infinitely many solutions; one representative:");
            print_factors(representative, exact, &tensor);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_full_reconstruction(fit: &FitResult, dims: &[usize]) {
    // slice-text layout: rows are i, slices (|) are k, columns are j
    assert_eq!(dims.len(), 3, "--full prints 3-way tensors");
    println!("reconstructed tensor:");
    for i in 1..=dims[0] {
        let mut slices = Vec::new();
        for k in 1..=dims[2] {
            let mut cells = Vec::new();
            for j in 1..=dims[1] {
                let v = fit
                    .factors
                    .evaluate(&MultiIndex::new(vec![i, j, k]))
                    .magnitude();
                cells.push(format!("{v:.4}"));
            }
            slices.push(cells.join(" "));
        }
        println!("  {}", slices.join(" | "));
    }
}

fn cmd_fit(input: &Path, full: bool, json: bool) -> Result<ExitCode, CliError> {
    let tensor = load_tensor(input)?;
    let fit = fit_least_squares(&tensor)?;

    if json {
        let doc = report::report_json(
            report::pattern_json(&analyze_pattern(tensor.pattern())),
            None,
            None,
            Some(report::fit_json(&fit)),
            &input.display().to_string(),
            tensor.mode(),
            VERSION,
        );
        print!("{}", report::render(&doc));
        return Ok(ExitCode::SUCCESS);
    }

    println!("objective (sum of squared log residuals): {:.12}", fit.objective);
    println!("factors:");
    for (mode, vec) in fit.factors.vectors().iter().enumerate() {
        let rendered: Vec<String> = vec.iter().map(|c| format!("{:.4}", c.magnitude)).collect();
        println!("  mode {}: {}", mode + 1, rendered.join(", "));
    }
    println!("residuals (log scale) and relative disturbance estimates:");
    for (idx, r) in &fit.residuals {
        println!(
            "  {idx}: {r:+.6}  (ε* ≈ {:+.4})",
            fit.relative_disturbances[idx]
        );
    }
    if full {
        print_full_reconstruction(&fit, tensor.pattern().dims());
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let dims: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::new(2, format!("cannot parse dims '{text}'")))?;
    if dims.len() < 2 || dims.iter().any(|&n| n == 0) {
        return Err(CliError::new(2, "need at least two positive dims"));
    }
    Ok(dims)
}

/// The observation patterns of the bundled example tables (dims 3×3×3).
fn named_pattern(name: &str) -> Option<&'static [[usize; 3]]> {
    match name {
        "table1" => Some(&[
            [1, 1, 1], [1, 2, 1], [1, 3, 1], [1, 1, 2], [1, 1, 3], [2, 1, 1], [3, 1, 1],
        ]),
        "table2" => Some(&[
            [1, 1, 1], [1, 2, 1], [1, 1, 2], [1, 3, 3], [2, 1, 1], [3, 3, 1], [3, 1, 3],
        ]),
        "table3" => Some(&[
            [1, 1, 1], [1, 3, 2], [1, 2, 3], [2, 1, 1], [3, 2, 1], [3, 1, 2], [3, 3, 3],
        ]),
        "table4" => Some(&[
            [1, 1, 1], [1, 3, 1], [2, 1, 1], [2, 2, 3], [3, 2, 1], [3, 1, 2], [3, 3, 3],
        ]),
        "table5" => Some(&[
            [1, 1, 1], [1, 2, 1], [1, 3, 1], [1, 1, 2], [1, 2, 2], [1, 1, 3], [1, 2, 3],
            [2, 3, 2], [2, 2, 3], [2, 3, 3], [3, 1, 1], [3, 3, 1], [3, 1, 2], [3, 2, 2],
            [3, 1, 3],
        ]),
        _ => None,
    }
}

fn all_cells(dims: &[usize]) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut stack = vec![1usize; dims.len()];
    'outer: loop {
        out.push(MultiIndex::new(stack.clone()));
        let mut k = dims.len();
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if stack[k] < dims[k] {
                stack[k] += 1;
                break;
            }
            stack[k] = 1;
        }
    }
    out
}

/// Small deterministic generator for pattern sampling (same algorithm as
/// the noise generator; the two streams use unrelated seeds).
struct Mix64(u64);

impl Mix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
}

fn parse_pattern_spec(
    spec: &str,
    dims: &[usize],
    seed: u64,
) -> Result<ObservationPattern, CliError> {
    if let Some(cells) = named_pattern(spec) {
        if dims != [3, 3, 3] {
            return Err(CliError::new(
                2,
                format!("pattern '{spec}' requires --dims 3,3,3"),
            ));
        }
        let indices = cells.iter().map(|c| MultiIndex::new(c.to_vec()));
        return Ok(ObservationPattern::new(dims.to_vec(), indices)?);
    }
    if spec == "full" {
        return Ok(ObservationPattern::new(dims.to_vec(), all_cells(dims))?);
    }
    if let Some(m_text) = spec.strip_prefix("random:") {
        let m: usize = m_text
            .parse()
            .map_err(|_| CliError::new(2, format!("bad random pattern size '{m_text}'")))?;
        let cells = all_cells(dims);
        if m == 0 || m > cells.len() {
            return Err(CliError::new(
                2,
                format!("random pattern size must be in 1..={}", cells.len()),
            ));
        }
        // Fisher-Yates prefix of a seeded shuffle
        let mut rng = Mix64(seed ^ 0x5DEECE66D);
        let mut cells = cells;
        for i in 0..m {
            let j = i + (rng.next() as usize) % (cells.len() - i);
            cells.swap(i, j);
        }
        cells.truncate(m);
        return Ok(ObservationPattern::new(dims.to_vec(), cells)?);
    }
    if let Some(p_text) = spec.strip_prefix("density:") {
        let p: f64 = p_text
            .parse()
            .map_err(|_| CliError::new(2, format!("bad density '{p_text}'")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::new(2, "density must lie in [0, 1]"));
        }
        let mut rng = Mix64(seed ^ 0xD1CE5BD1CE5B);
        let cells: Vec<MultiIndex> = all_cells(dims)
            .into_iter()
            .filter(|_| (rng.next() >> 11) as f64 / (1u64 << 53) as f64 <= p)
            .collect();
        if cells.is_empty() {
            return Err(CliError::new(2, "density produced an empty pattern"));
        }
        return Ok(ObservationPattern::new(dims.to_vec(), cells)?);
    }
    // explicit list: i,j,k;i,j,k;…
    let indices: Result<Vec<MultiIndex>, CliError> = spec
        .split(';')
        .map(|cell| {
            let coords: Result<Vec<usize>, _> =
                cell.split(',').map(|c| c.trim().parse::<usize>()).collect();
            coords
                .ok()
                .filter(|c| c.len() == dims.len() && c.iter().all(|&x| x >= 1))
                .map(MultiIndex::new)
                .ok_or_else(|| CliError::new(2, format!("cannot parse pattern cell '{cell}'")))
        })
        .collect();
    Ok(ObservationPattern::new(dims.to_vec(), indices?)?)
}

fn parse_factor_spec(spec: &str, dims: &[usize]) -> Result<RankOneFactors, CliError> {
    let vectors: Result<Vec<Vec<f64>>, CliError> = spec
        .split(';')
        .map(|mode_text| {
            mode_text
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite() && *x > 0.0)
                        .ok_or_else(|| {
                            CliError::new(2, format!("bad factor component '{}'", v.trim()))
                        })
                })
                .collect()
        })
        .collect();
    let vectors = vectors?;
    let shapes: Vec<usize> = vectors.iter().map(Vec::len).collect();
    if shapes != dims {
        return Err(CliError::new(
            2,
            format!("factor shapes {shapes:?} do not match dims {dims:?}"),
        ));
    }
    Ok(RankOneFactors::from_positive(vectors)?)
}

fn cmd_generate(
    dims_text: &str,
    ones: bool,
    factors: Option<&str>,
    pattern_spec: &str,
    amp: f64,
    seed: u64,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let dims = parse_dims(dims_text)?;
    let factors = match (ones, factors) {
        (true, None) => RankOneFactors::all_ones(&dims),
        (false, Some(spec)) => parse_factor_spec(spec, &dims)?,
        (true, Some(_)) => {
            return Err(CliError::new(2, "--ones and --factors are exclusive"));
        }
        (false, None) => {
            return Err(CliError::new(2, "need --ones or --factors"));
        }
    };
    let pattern = parse_pattern_spec(pattern_spec, &dims, seed)?;
    let noise = NoiseSpec::uniform(amp, seed);
    let tensor = generate_noisy(&factors, &pattern, &noise)?;
    let json = to_json(&tensor);

    eprintln!("true factors (standard gauge):");
    for (mode, vec) in factors.vectors().iter().enumerate() {
        let rendered: Vec<String> = vec.iter().map(|c| format!("{}", c.magnitude)).collect();
        eprintln!("  mode {}: {}", mode + 1, rendered.join(", "));
    }
    match out {
        Some(path) => {
            std::fs::write(path, &json)
                .map_err(|e| CliError::new(2, format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {} observations to {}", pattern.m(), path.display());
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn oracle_cap() -> usize {
    std::env::var("RANKONE_ORACLE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

fn keys_of(set: &SolutionSet) -> Option<Vec<Vec<rankone_core::model::Rational>>> {
    match set {
        SolutionSet::Finite(sols) => Some(sols.iter().map(|s| s.phase_key()).collect()),
        _ => None,
    }
}

fn cmd_oracle(input: &Path) -> Result<ExitCode, CliError> {
    let tensor = load_tensor(input)?;
    let cap = oracle_cap();
    let mut mismatch = false;

    // complex side: σ enumeration vs Smith-normal-form counting
    let brute = brute_force_sigma_with_cap(&tensor, cap)?;
    let fast: ComplexSolveResult = count_complex(&tensor);
    match (&brute, &fast.solutions) {
        (SolutionSet::Infinite { .. }, SolutionSet::Infinite { .. }) => {
            println!("MATCH: infinitely many complex solutions (both paths)");
        }
        _ => {
            let brute_keys = keys_of(&brute);
            let fast_keys = keys_of(&fast.solutions);
            if brute_keys.is_some() && brute_keys == fast_keys {
                println!(
                    "MATCH: {} complex solution{}",
                    brute_keys.as_ref().unwrap().len(),
                    if brute_keys.as_ref().unwrap().len() == 1 { "" } else { "s" }
                );
            } else {
                println!(
                    "MISMATCH: brute force found {:?} solutions, fast path {}",
                    brute_keys.map(|k| k.len()),
                    fast.count
                );
                mismatch = true;
            }
        }
    }

    // real side: exhaustive sign search vs the GF(2) solver
    if tensor.is_real() {
        let unknowns = tensor.pattern().unknown_count();
        if unknowns > cap {
            return Err(SolveError::CapExceeded {
                m: unknowns,
                cap,
            }
            .into());
        }
        let dm = build_design_matrix(tensor.pattern());
        let real = solve_real(&tensor)?;
        let mut expected = 0u64;
        for mask in 0u64..(1u64 << unknowns) {
            let ok = (0..dm.m()).all(|r| {
                let parity = dm
                    .row_support(r)
                    .iter()
                    .filter(|&&c| mask >> c & 1 == 1)
                    .count()
                    % 2
                    == 1;
                let negative = !tensor.phase(&dm.row_labels()[r]).is_zero();
                parity == negative
            });
            if ok {
                expected += 1;
            }
        }
        // sign search counts sign assignments; with inconsistent magnitudes
        // the real count is 0 regardless
        let magnitude_ok = !matches!(
            rankone_core::real_solver::solve_magnitudes(&tensor),
            rankone_core::real_solver::MagnitudeOutcome::Inconsistent { .. }
        );
        let expected_count = if magnitude_ok { expected } else { 0 };
        let actual = match &real.count {
            rankone_core::model::SolutionCount::Finite(n) => n.to_string(),
            rankone_core::model::SolutionCount::Infinite => "infinite".to_string(),
        };
        if real.count == rankone_core::model::SolutionCount::Infinite {
            println!("MATCH: real family infinite (sign search found {expected} sign patterns)");
        } else if actual == expected_count.to_string() {
            println!("MATCH: real count {actual}");
        } else {
            println!("MISMATCH: sign search found {expected_count}, solver reports {actual}");
            mismatch = true;
        }
    } else {
        println!("real side skipped: observed values are not all real");
    }

    if mismatch {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

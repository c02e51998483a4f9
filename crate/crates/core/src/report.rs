//! Machine-readable analysis reports with deterministic formatting.
//!
//! All JSON objects use `serde_json`'s default `BTreeMap` backing, so keys
//! serialize in sorted order; floats are rounded to 12 significant digits
//! before insertion; rationals print canonically as `p` or `p/q`. Two runs
//! on the same input produce byte-identical documents.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::complex_solver::{ComplexSolveResult, ComplexStatus};
use crate::model::{
    format_rational, FactorComponent, PhaseTurns, RankOneFactors, SolutionCount, SolutionSet,
    ValueMode,
};
use crate::noisy_fit::FitResult;
use crate::pattern::{DesignMatrix, PatternReport};
use crate::real_solver::{RealSolveResult, RealStatus};

/// A float as a JSON number rounded to 12 significant digits.
pub fn sig12(x: f64) -> Value {
    if x == 0.0 {
        return json!(0.0);
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    serde_json::Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// A solution count as a JSON integer or the string `"infinite"`.
pub fn count_json(count: &SolutionCount) -> Value {
    match count {
        SolutionCount::Finite(n) => match n.to_u64() {
            Some(small) => json!(small),
            None => json!(n.to_string()),
        },
        SolutionCount::Infinite => json!("infinite"),
    }
}

fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(small) => json!(small),
        None => json!(v.to_string()),
    }
}

/// Human notation for a phase: `1`, `-1`, or `e^(2πi·p/q)`.
pub fn phase_notation(phase: &PhaseTurns) -> String {
    if phase.is_zero() {
        "1".to_string()
    } else if phase.is_real() {
        "-1".to_string()
    } else {
        format!("e^(2πi·{})", format_rational(phase.as_turns()))
    }
}

/// Decimal-and-phase rendering of one factor component.
pub fn component_notation(c: &FactorComponent) -> String {
    let mag = format!("{:.6}", c.magnitude);
    let mag = mag.trim_end_matches('0').trim_end_matches('.');
    if c.phase.is_zero() {
        mag.to_string()
    } else if c.phase.is_real() {
        format!("-{mag}")
    } else if c.magnitude == 1.0 {
        phase_notation(&c.phase)
    } else {
        format!("{mag}·{}", phase_notation(&c.phase))
    }
}

pub fn pattern_json(report: &PatternReport) -> Value {
    json!({
        "m": report.m,
        "unknowns": report.unknowns,
        "rank": report.rank,
        "condition_a": report.condition_a,
        "dof": report.dof,
        "overdetermined": report.overdetermined,
    })
}

fn factor_component_json(c: &FactorComponent, dm: Option<&DesignMatrix>) -> Value {
    let mut obj = Map::new();
    obj.insert("magnitude".into(), sig12(c.magnitude));
    obj.insert(
        "phase_turns".into(),
        json!(format_rational(c.phase.as_turns())),
    );
    obj.insert("notation".into(), json!(component_notation(c)));
    if let (Some(dm), Some(exps)) = (dm, &c.magnitude_exponents) {
        let list: Vec<Value> = exps
            .iter()
            .map(|(row, coeff)| {
                json!([
                    dm.row_labels()[*row].to_string(),
                    format_rational(coeff),
                ])
            })
            .collect();
        obj.insert("magnitude_exponents".into(), Value::Array(list));
    }
    Value::Object(obj)
}

/// Factor vectors as JSON; pass the design matrix to include exact exponent
/// forms of the magnitudes.
pub fn factors_json(factors: &RankOneFactors, dm: Option<&DesignMatrix>) -> Value {
    let vectors: Vec<Value> = factors
        .vectors()
        .iter()
        .map(|v| {
            Value::Array(
                v.iter()
                    .map(|c| factor_component_json(c, dm))
                    .collect(),
            )
        })
        .collect();
    Value::Array(vectors)
}

fn solutions_json(set: &SolutionSet, limit: Option<usize>, dm: Option<&DesignMatrix>) -> Value {
    match set {
        SolutionSet::Finite(sols) => {
            let shown = limit.unwrap_or(sols.len()).min(sols.len());
            json!({
                "kind": "finite",
                "listed": shown,
                "solutions": sols[..shown]
                    .iter()
                    .map(|s| factors_json(s, dm))
                    .collect::<Vec<_>>(),
            })
        }
        SolutionSet::Capped { base } => json!({
            "kind": "capped",
            "solutions": [factors_json(base, dm)],
        }),
        SolutionSet::Infinite { representative } => json!({
            "kind": "infinite",
            "solutions": [factors_json(representative, dm)],
        }),
    }
}

pub fn real_status_str(status: RealStatus) -> &'static str {
    match status {
        RealStatus::NoSolutionMagnitude => "no_solution_magnitude",
        RealStatus::NoSolutionSign => "no_solution_sign",
        RealStatus::Solutions => "ok",
    }
}

pub fn complex_status_str(status: ComplexStatus) -> &'static str {
    match status {
        ComplexStatus::NoSolutionMagnitude => "no_solution_magnitude",
        ComplexStatus::NoSolutionPhase => "no_solution_phase",
        ComplexStatus::Solutions => "ok",
    }
}

/// Summary of a real solve for the analysis report.
pub fn real_json(result: &RealSolveResult) -> Value {
    json!({
        "status": real_status_str(result.status),
        "count": count_json(&result.count),
        "sign_kernel_dimension": result.sign_kernel.len(),
    })
}

/// Placeholder summary when the tensor has non-real observed values.
pub fn real_not_applicable() -> Value {
    json!({
        "status": "non_real_values",
        "count": 0,
        "sign_kernel_dimension": 0,
    })
}

/// Summary of a complex solve for the analysis report.
pub fn complex_json(result: &ComplexSolveResult) -> Value {
    json!({
        "status": complex_status_str(result.status),
        "count": count_json(&result.count),
        "divisors": result.divisors.iter().map(big_json).collect::<Vec<_>>(),
    })
}

/// Full solution listing (used by `solve` and the browser demo).
pub fn solve_json(
    status: &str,
    count: &SolutionCount,
    set: &SolutionSet,
    limit: Option<usize>,
    dm: Option<&DesignMatrix>,
) -> Value {
    json!({
        "status": status,
        "count": count_json(count),
        "solutions": solutions_json(set, limit, dm),
    })
}

/// Fit summary: factors, objective, residual tables.
pub fn fit_json(fit: &FitResult) -> Value {
    let residuals: Map<String, Value> = fit
        .residuals
        .iter()
        .map(|(idx, r)| (idx.to_string(), sig12(*r)))
        .collect();
    let relative: Map<String, Value> = fit
        .relative_disturbances
        .iter()
        .map(|(idx, r)| (idx.to_string(), sig12(*r)))
        .collect();
    json!({
        "objective": sig12(fit.objective),
        "factors": factors_json(&fit.factors, None),
        "residuals": residuals,
        "relative_disturbances": relative,
    })
}

/// Assembles the top-level report document.
pub fn report_json(
    pattern: Value,
    real: Option<Value>,
    complex: Option<Value>,
    fit: Option<Value>,
    input: &str,
    mode: ValueMode,
    version: &str,
) -> Value {
    let mut doc = Map::new();
    doc.insert("pattern".into(), pattern);
    doc.insert("real".into(), real.unwrap_or(Value::Null));
    doc.insert("complex".into(), complex.unwrap_or(Value::Null));
    doc.insert("fit".into(), fit.unwrap_or(Value::Null));
    doc.insert(
        "provenance".into(),
        json!({
            "input": input,
            "mode": mode.to_string(),
            "version": version,
        }),
    );
    Value::Object(doc)
}

/// Renders a report with sorted keys and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON rendering cannot fail");
    text.push('\n');
    text
}

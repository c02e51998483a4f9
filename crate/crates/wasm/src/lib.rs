//! Browser bindings for the rank-one completion analyzer.
//!
//! Every function takes tensor text (slice format or JSON, auto-detected)
//! and returns a JSON string; errors come back as `{"error": "..."}` so the
//! page never traps. Compiled with `wasm-pack build --target web`; the
//! functions are plain Rust and also run (and are tested) natively.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use rankone_core::complex_solver::count_complex;
use rankone_core::model::{
    parse_json, parse_slice_text, PartialTensor, RankOneFactors, SolutionCount,
};
use rankone_core::noisy_fit::{fit_least_squares, generate_noisy, NoiseSpec};
use rankone_core::pattern::analyze_pattern;
use rankone_core::real_solver::solve_real;
use rankone_core::report;

fn parse_input(text: &str) -> Result<PartialTensor, String> {
    let parsed = if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_slice_text(text)
    };
    parsed.map_err(|e| e.to_string())
}

fn error_json(message: String) -> String {
    report::render(&json!({ "error": message }))
}

/// Condition (A), degrees of freedom, and solution counts over ℝ and ℂ.
#[wasm_bindgen]
pub fn analyze(input: &str) -> String {
    let tensor = match parse_input(input) {
        Ok(t) => t,
        Err(e) => return error_json(e),
    };
    let pattern = report::pattern_json(&analyze_pattern(tensor.pattern()));
    let real = if tensor.is_real() {
        match solve_real(&tensor) {
            Ok(res) => report::real_json(&res),
            Err(e) => return error_json(e.to_string()),
        }
    } else {
        report::real_not_applicable()
    };
    let complex = report::complex_json(&count_complex(&tensor));
    let doc = report::report_json(
        pattern,
        Some(real),
        Some(complex),
        None,
        "browser",
        tensor.mode(),
        env!("CARGO_PKG_VERSION"),
    );
    report::render(&doc)
}

/// All completions over the requested field (`"real"` or `"complex"`),
/// with phases both as rational turns and as float angles for drawing.
#[wasm_bindgen]
pub fn solve(input: &str, field: &str, limit: usize) -> String {
    let tensor = match parse_input(input) {
        Ok(t) => t,
        Err(e) => return error_json(e),
    };
    let limit = if limit == 0 { None } else { Some(limit) };
    let (status, count, set) = match field {
        "real" => {
            if !tensor.is_real() {
                return error_json(
                    "real solve needs real observed values (phases 0 or 1/2)".into(),
                );
            }
            match solve_real(&tensor) {
                Ok(res) => (
                    report::real_status_str(res.status),
                    res.count.clone(),
                    res.solutions,
                ),
                Err(e) => return error_json(e.to_string()),
            }
        }
        _ => {
            let res = count_complex(&tensor);
            (
                report::complex_status_str(res.status),
                res.count.clone(),
                res.solutions,
            )
        }
    };
    let mut doc = report::solve_json(status, &count, &set, limit, None);
    // phases as floats, for the unit-circle rendering
    if let Some(solutions) = doc
        .get_mut("solutions")
        .and_then(|s| s.get_mut("solutions"))
        .and_then(Value::as_array_mut)
    {
        for sol in solutions {
            if let Some(modes) = sol.as_array_mut() {
                for mode in modes {
                    if let Some(components) = mode.as_array_mut() {
                        for c in components {
                            let turns: f64 = c["phase_turns"]
                                .as_str()
                                .and_then(parse_turns_f64)
                                .unwrap_or(0.0);
                            c["phase_float"] = json!(turns);
                        }
                    }
                }
            }
        }
    }
    report::render(&doc)
}

fn parse_turns_f64(text: &str) -> Option<f64> {
    rankone_core::model::parse_rational(text)
        .map(|r| rankone_core::model::rational_to_f64(&r))
}

/// Log-domain least-squares fit plus the full reconstructed tensor.
#[wasm_bindgen]
pub fn fit(input: &str) -> String {
    let tensor = match parse_input(input) {
        Ok(t) => t,
        Err(e) => return error_json(e),
    };
    let fit = match fit_least_squares(&tensor) {
        Ok(f) => f,
        Err(e) => return error_json(e.to_string()),
    };
    let dims = tensor.pattern().dims().to_vec();
    let mut doc = report::fit_json(&fit);
    doc["pattern"] = report::pattern_json(&analyze_pattern(tensor.pattern()));
    doc["dims"] = json!(dims);
    doc["reconstruction"] = reconstruction_json(&fit.factors, &dims);
    doc["observed"] = json!(tensor
        .pattern()
        .indices()
        .map(|i| i.to_string())
        .collect::<Vec<_>>());
    report::render(&doc)
}

fn reconstruction_json(factors: &RankOneFactors, dims: &[usize]) -> Value {
    if dims.len() != 3 {
        return Value::Null;
    }
    let mut rows = Vec::new();
    for i in 1..=dims[0] {
        let mut slices = Vec::new();
        for k in 1..=dims[2] {
            let mut cells = Vec::new();
            for j in 1..=dims[1] {
                let idx = rankone_core::model::MultiIndex::new(vec![i, j, k]);
                cells.push(report::sig12(factors.evaluate(&idx).magnitude()));
            }
            slices.push(Value::Array(cells));
        }
        rows.push(Value::Array(slices));
    }
    Value::Array(rows)
}

/// A fresh noisy sample of the all-ones 3×3×3 tensor on the example
/// pattern, as slice text ready to paste into the input box.
#[wasm_bindgen]
pub fn noisy_example(amplitude: f64, seed: u64) -> String {
    let truth = RankOneFactors::all_ones(&[3, 3, 3]);
    let cells: &[[usize; 3]] = &[
        [1, 1, 1], [1, 2, 1], [1, 3, 1], [1, 1, 2], [1, 2, 2], [1, 1, 3], [1, 2, 3],
        [2, 3, 2], [2, 2, 3], [2, 3, 3], [3, 1, 1], [3, 3, 1], [3, 1, 2], [3, 2, 2],
        [3, 1, 3],
    ];
    let pattern = rankone_core::model::ObservationPattern::new(
        vec![3, 3, 3],
        cells.iter().map(|c| rankone_core::model::MultiIndex::new(c.to_vec())),
    )
    .expect("static pattern is valid");
    let noisy = match generate_noisy(&truth, &pattern, &NoiseSpec::uniform(amplitude, seed)) {
        Ok(t) => t,
        Err(e) => return format!("error: {e}"),
    };
    let mut lines = Vec::new();
    for i in 1..=3usize {
        let mut slices = Vec::new();
        for k in 1..=3usize {
            let mut cellstr = Vec::new();
            for j in 1..=3usize {
                let idx = rankone_core::model::MultiIndex::new(vec![i, j, k]);
                if pattern.contains(&idx) {
                    cellstr.push(format!("{:.4}", noisy.magnitude_f64(&idx)));
                } else {
                    cellstr.push("*".to_string());
                }
            }
            slices.push(cellstr.join(" "));
        }
        lines.push(slices.join(" | "));
    }
    lines.join("\n")
}

/// Human-readable one-line verdict used for the page header.
#[wasm_bindgen]
pub fn verdict(input: &str) -> String {
    let tensor = match parse_input(input) {
        Ok(t) => t,
        Err(e) => return format!("parse error: {e}"),
    };
    let report = analyze_pattern(tensor.pattern());
    if !report.condition_a {
        return format!(
            "condition (A) fails: {} degrees of freedom, completions are never locally unique",
            report.dof
        );
    }
    let complex = count_complex(&tensor);
    let real_text = if tensor.is_real() {
        match solve_real(&tensor) {
            Ok(res) => format!("{} over ℝ", res.count),
            Err(_) => "n/a over ℝ".to_string(),
        }
    } else {
        "n/a over ℝ (complex values)".to_string()
    };
    let complex_text = match (&complex.count, complex.count.is_zero()) {
        (SolutionCount::Infinite, _) => "infinitely many over ℂ".to_string(),
        (c, _) => format!("{c} over ℂ"),
    };
    format!("locally unique; {real_text}, {complex_text}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE3: &str = "\
1 * * | * * 1 | * 1 *
1 * * | * * * | * * *
* 1 * | 1 * * | * * 1";

    #[test]
    fn analyze_returns_report_json() {
        let out = analyze(TABLE3);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["real"]["count"], json!(1));
        assert_eq!(doc["complex"]["count"], json!(3));
    }

    #[test]
    fn solve_attaches_float_phases() {
        let out = solve(TABLE3, "complex", 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        let sols = doc["solutions"]["solutions"].as_array().unwrap();
        assert_eq!(sols.len(), 3);
        let phase = sols[1][0][2]["phase_float"].as_f64().unwrap();
        assert!((phase - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn errors_come_back_as_json() {
        let out = analyze("0");
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert!(doc["error"].as_str().unwrap().contains("nonzero"));
    }

    #[test]
    fn noisy_example_is_parseable_and_fittable() {
        let text = noisy_example(0.2, 7);
        let doc: Value = serde_json::from_str(&fit(&text)).unwrap();
        assert!(doc["objective"].as_f64().unwrap() >= 0.0);
        assert_eq!(doc["reconstruction"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn verdict_summarizes() {
        assert!(verdict(TABLE3).contains("1 over ℝ"));
        assert!(verdict(TABLE3).contains("3 over ℂ"));
    }
}

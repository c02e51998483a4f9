//! Input formats: slice text (mirroring the layout of printed tensor
//! tables) and a JSON coordinate format.
//!
//! Slice text encodes a 3-way tensor. Lines are rows (index `i`); slices,
//! separated by `|`, run over the third index `k`; cells within a slice are
//! columns (index `j`). A cell is `*` for a missing value, a rational or
//! decimal literal, or `mag@turns` for a complex value with phase given as a
//! rational fraction of a turn. Bare negatives are sugar for `mag@1/2`.
//!
//! The JSON format is
//! `{"dims":[...], "entries":[{"index":[...], "mag":…, "phase_turns":…}]}`
//! where `mag` and `phase_turns` are strings parsing as exact rationals or
//! plain numbers. The tensor is stored in exact mode iff every value in the
//! file is a string.

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::ModelError;
use crate::model::scalar::{
    format_rational, parse_rational, PhaseTurns, PolarScalar, Rational,
};
use crate::model::tensor::{FloatValue, MultiIndex, PartialTensor, ValueMode};

fn parse_cell(
    cell: &str,
    row: usize,
    slice: usize,
    column: usize,
) -> Result<Option<PolarScalar>, ModelError> {
    if cell == "*" {
        return Ok(None);
    }
    let invalid = || ModelError::InvalidCell {
        cell: cell.to_string(),
        row,
        slice,
        column,
    };
    let index = || MultiIndex::new(vec![row, column, slice]);
    if let Some((mag_text, phase_text)) = cell.split_once('@') {
        let mag = parse_rational(mag_text).ok_or_else(invalid)?;
        let phase = parse_rational(phase_text).ok_or_else(invalid)?;
        if mag.is_zero() {
            return Err(ModelError::NonzeroViolation { index: index() });
        }
        if mag.is_negative() {
            return Err(ModelError::NonpositiveMagnitude { index: index() });
        }
        Ok(Some(
            PolarScalar::new(mag, PhaseTurns::new(phase)).expect("magnitude checked positive"),
        ))
    } else {
        let value = parse_rational(cell).ok_or_else(invalid)?;
        match PolarScalar::from_real(&value) {
            Some(v) => Ok(Some(v)),
            None => Err(ModelError::NonzeroViolation { index: index() }),
        }
    }
}

/// Parses slice text into an exact-mode partial tensor.
pub fn parse_slice_text(text: &str) -> Result<PartialTensor, ModelError> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(ModelError::EmptyPattern);
    }

    let mut entries: Vec<(MultiIndex, PolarScalar)> = Vec::new();
    let mut n_slices = 0usize;
    let mut width = 0usize;
    for (li, line) in lines.iter().enumerate() {
        let row = li + 1;
        let slices: Vec<&str> = line.split('|').collect();
        if li == 0 {
            n_slices = slices.len();
        } else if slices.len() != n_slices {
            return Err(ModelError::RaggedRows {
                row,
                expected: n_slices,
                found: slices.len(),
            });
        }
        for (si, slice_text) in slices.iter().enumerate() {
            let slice = si + 1;
            let cells: Vec<&str> = slice_text.split_whitespace().collect();
            if li == 0 && si == 0 {
                width = cells.len();
            }
            if cells.len() != width {
                return Err(ModelError::RaggedRows {
                    row,
                    expected: width,
                    found: cells.len(),
                });
            }
            for (ci, cell) in cells.iter().enumerate() {
                let column = ci + 1;
                if let Some(value) = parse_cell(cell, row, slice, column)? {
                    entries.push((MultiIndex::new(vec![row, column, slice]), value));
                }
            }
        }
    }

    let dims = vec![lines.len(), width, n_slices];
    if width == 0 {
        return Err(ModelError::EmptyPattern);
    }
    PartialTensor::from_exact(dims, entries)
}

fn json_err(msg: impl Into<String>) -> ModelError {
    ModelError::InvalidInput(msg.into())
}

enum JsonScalar {
    Exact(Rational),
    Float(f64),
}

fn parse_json_scalar(v: &Value, what: &str) -> Result<JsonScalar, ModelError> {
    match v {
        Value::String(s) => parse_rational(s)
            .map(JsonScalar::Exact)
            .ok_or_else(|| json_err(format!("{what} string '{s}' is not a rational"))),
        Value::Number(n) => n
            .as_f64()
            .filter(|x| x.is_finite())
            .map(JsonScalar::Float)
            .ok_or_else(|| json_err(format!("{what} must be a finite number"))),
        _ => Err(json_err(format!("{what} must be a string or a number"))),
    }
}

/// Parses the JSON coordinate format; exact mode iff all values are strings.
pub fn parse_json(text: &str) -> Result<PartialTensor, ModelError> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| json_err(format!("malformed JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| json_err("expected a JSON object"))?;

    let dims: Vec<usize> = obj
        .get("dims")
        .and_then(Value::as_array)
        .ok_or_else(|| json_err("missing 'dims' array"))?
        .iter()
        .map(|v| {
            v.as_u64()
                .filter(|&n| n >= 1)
                .map(|n| n as usize)
                .ok_or_else(|| ModelError::InvalidDims(format!("bad dim {v}")))
        })
        .collect::<Result<_, _>>()?;

    let entries_json = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| json_err("missing 'entries' array"))?;
    if entries_json.is_empty() {
        return Err(ModelError::EmptyPattern);
    }

    struct RawEntry {
        index: MultiIndex,
        mag: JsonScalar,
        phase: JsonScalar,
    }

    let mut raw = Vec::with_capacity(entries_json.len());
    let mut all_exact = true;
    for e in entries_json {
        let eo = e
            .as_object()
            .ok_or_else(|| json_err("each entry must be an object"))?;
        let coords: Vec<usize> = eo
            .get("index")
            .and_then(Value::as_array)
            .ok_or_else(|| json_err("entry missing 'index'"))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .filter(|&n| n >= 1)
                    .map(|n| n as usize)
                    .ok_or_else(|| json_err(format!("bad index coordinate {v}")))
            })
            .collect::<Result<_, _>>()?;
        if coords.len() != dims.len() {
            return Err(json_err(format!(
                "index {coords:?} has {} coordinates, dims have {}",
                coords.len(),
                dims.len()
            )));
        }
        let index = MultiIndex::new(coords);
        let mag = parse_json_scalar(
            eo.get("mag").ok_or_else(|| json_err("entry missing 'mag'"))?,
            "mag",
        )?;
        let phase = match eo.get("phase_turns") {
            Some(v) => parse_json_scalar(v, "phase_turns")?,
            None => JsonScalar::Exact(Rational::from_integer(0.into())),
        };
        if matches!(mag, JsonScalar::Float(_)) || matches!(phase, JsonScalar::Float(_)) {
            all_exact = false;
        }
        raw.push(RawEntry { index, mag, phase });
    }

    if all_exact {
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let (mag, phase) = match (e.mag, e.phase) {
                (JsonScalar::Exact(m), JsonScalar::Exact(p)) => (m, p),
                _ => unreachable!("all_exact implies exact scalars"),
            };
            if mag.is_zero() {
                return Err(ModelError::NonzeroViolation { index: e.index });
            }
            if mag.is_negative() {
                return Err(ModelError::NonpositiveMagnitude { index: e.index });
            }
            let value = PolarScalar::new(mag, PhaseTurns::new(phase))
                .expect("magnitude checked positive");
            entries.push((e.index, value));
        }
        PartialTensor::from_exact(dims, entries)
    } else {
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let mag = match e.mag {
                JsonScalar::Exact(m) => crate::model::scalar::rational_to_f64(&m),
                JsonScalar::Float(x) => x,
            };
            // A float phase is converted through its exact binary value, so
            // phase arithmetic stays exact downstream.
            let phase = match e.phase {
                JsonScalar::Exact(p) => PhaseTurns::new(p),
                JsonScalar::Float(x) => PhaseTurns::new(
                    Rational::from_float(x)
                        .ok_or_else(|| json_err("phase_turns must be finite"))?,
                ),
            };
            let index = e.index;
            let value = FloatValue::new(mag, phase)
                .ok_or(ModelError::NonpositiveMagnitude { index: index.clone() })?;
            entries.push((index, value));
        }
        PartialTensor::from_float(dims, entries)
    }
}

/// Serializes a tensor to the JSON coordinate format. Exact tensors
/// round-trip bit-exactly through [`parse_json`].
pub fn to_json(tensor: &PartialTensor) -> String {
    let entries: Vec<Value> = tensor
        .pattern()
        .indices()
        .map(|idx| {
            let mut entry = Map::new();
            entry.insert(
                "index".into(),
                Value::Array(
                    idx.coordinates()
                        .iter()
                        .map(|&c| Value::from(c as u64))
                        .collect(),
                ),
            );
            match tensor.mode() {
                ValueMode::Exact => {
                    let v = tensor.exact_value(idx).expect("exact mode");
                    entry.insert("mag".into(), json!(format_rational(v.magnitude())));
                    entry.insert(
                        "phase_turns".into(),
                        json!(format_rational(v.phase().as_turns())),
                    );
                }
                ValueMode::Float => {
                    entry.insert("mag".into(), json!(tensor.magnitude_f64(idx)));
                    entry.insert(
                        "phase_turns".into(),
                        json!(format_rational(tensor.phase(idx).as_turns())),
                    );
                }
            }
            Value::Object(entry)
        })
        .collect();
    let doc = json!({
        "dims": tensor.pattern().dims(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&doc).expect("JSON serialization cannot fail")
}

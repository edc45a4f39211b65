//! The on-disk document model: one JSON object per file, exact scalars
//! serialized as "num/den" strings so no float contamination can occur in
//! exact mode.

use std::collections::BTreeMap;

use penrose_core::engine::{IndexSet, PenroseParams};
use penrose_core::matrix::SymMatrix;
use penrose_core::poly::HomogeneousPoly;
use penrose_core::scalar::{Mode, Scalar};
use penrose_core::{CompleteConic, PenroseLattice};
use serde_json::{json, Map, Value};

#[derive(Debug)]
pub struct DocError(pub String);

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for DocError {}

pub type DocResult<T> = Result<T, DocError>;

fn bad(msg: impl Into<String>) -> DocError {
    DocError(msg.into())
}

pub fn parse_mode(doc: &Value) -> Mode {
    match doc.get("mode").and_then(Value::as_str) {
        Some("float") => Mode::Float,
        _ => Mode::Exact,
    }
}

pub fn parse_scalar(v: &Value, mode: Mode) -> DocResult<Scalar> {
    match (v, mode) {
        (Value::String(s), Mode::Exact) => {
            let s = s.trim();
            if let Some((n, d)) = s.split_once('/') {
                let num: i64 = n.trim().parse().map_err(|_| bad(format!("bad numerator in {s:?}")))?;
                let den: i64 = d.trim().parse().map_err(|_| bad(format!("bad denominator in {s:?}")))?;
                if den == 0 {
                    return Err(bad(format!("zero denominator in {s:?}")));
                }
                Ok(Scalar::ratio(num, den))
            } else {
                let n: i64 = s.parse().map_err(|_| bad(format!("bad integer {s:?}")))?;
                Ok(Scalar::int(n))
            }
        }
        (Value::Number(n), Mode::Exact) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::int(i))
            } else {
                Err(bad(format!("non-integer number {n} in exact mode")))
            }
        }
        (Value::String(s), Mode::Float) => {
            let f: f64 = s.trim().parse().map_err(|_| bad(format!("bad float {s:?}")))?;
            Ok(Scalar::float(f))
        }
        (Value::Number(n), Mode::Float) => Ok(Scalar::float(n.as_f64().ok_or_else(|| bad("bad number"))?)),
        _ => Err(bad(format!("scalar expected, found {v}"))),
    }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(_) => Value::String(format!("{s}")),
        Scalar::Float(f) => json!(f),
    }
}

pub fn parse_vector(v: &Value, mode: Mode) -> DocResult<Vec<Scalar>> {
    let arr = v.as_array().ok_or_else(|| bad("vector expected"))?;
    arr.iter().map(|x| parse_scalar(x, mode)).collect()
}

pub fn vector_to_value(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_value).collect())
}

pub fn parse_matrix(v: &Value, mode: Mode) -> DocResult<SymMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("matrix expected"))?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n);
    for r in rows {
        let row = parse_vector(r, mode)?;
        if row.len() != n {
            return Err(bad("matrix is not square"));
        }
        data.push(row);
    }
    SymMatrix::from_rows(&data).map_err(|e| bad(format!("matrix: {e}")))
}

pub fn matrix_to_value(m: &SymMatrix) -> Value {
    let n = m.order();
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| scalar_to_value(m.at(i, j))).collect()))
            .collect(),
    )
}

/// Parses the `params` section into lattice parameters.
pub fn parse_params(doc: &Value) -> DocResult<PenroseParams> {
    let mode = parse_mode(doc);
    let section = doc.get("params").ok_or_else(|| bad("missing params section"))?;
    let n = section.get("n").and_then(Value::as_u64).unwrap_or(3) as usize;
    let vars = match doc.get("space").and_then(Value::as_str) {
        Some("quadric") => 4,
        _ => 3,
    };
    let s0_m = parse_matrix(section.get("s0").ok_or_else(|| bad("missing s0"))?, mode)?;
    if s0_m.order() != vars {
        return Err(bad(format!("s0 has order {} but the space needs {vars}", s0_m.order())));
    }
    let s0 = penrose_core::sym_to_poly(&s0_m);
    let lines_v = section.get("lines").and_then(Value::as_array).ok_or_else(|| bad("missing lines"))?;
    if lines_v.len() != n {
        return Err(bad(format!("expected {n} lines")));
    }
    let lines: Vec<HomogeneousPoly> = lines_v
        .iter()
        .map(|l| Ok(HomogeneousPoly::linear(&parse_vector(l, mode)?)))
        .collect::<DocResult<_>>()?;
    let d = parse_vector(section.get("d").ok_or_else(|| bad("missing d"))?, mode)?;
    let a_obj = section.get("a").and_then(Value::as_object).ok_or_else(|| bad("missing a"))?;
    let mut a = BTreeMap::new();
    for (k, v) in a_obj {
        let digits: Vec<u32> = k.chars().filter_map(|c| c.to_digit(10)).collect();
        if digits.len() != 2 {
            return Err(bad(format!("bad off-diagonal key {k:?}")));
        }
        let (j, kk) = (digits[0] as usize, digits[1] as usize);
        a.insert((j.min(kk), j.max(kk)), parse_scalar(v, mode)?);
    }
    PenroseParams::new(vars, n, s0, lines, d, a).map_err(|e| bad(format!("params: {e}")))
}

pub fn params_to_value(p: &PenroseParams) -> Value {
    let mut a = Map::new();
    for ((j, k), v) in &p.a {
        a.insert(format!("{j}{k}"), scalar_to_value(v));
    }
    json!({
        "n": p.n,
        "s0": matrix_to_value(&penrose_core::poly_to_sym(&p.s0).expect("degree 2")),
        "lines": Value::Array(p.lines.iter().map(|l| vector_to_value(&l.linear_coeffs())).collect()),
        "d": vector_to_value(&p.d),
        "a": Value::Object(a),
    })
}

/// Parses a `config` section: vertex label -> complete conic.
pub fn parse_config(doc: &Value) -> DocResult<BTreeMap<IndexSet, CompleteConic>> {
    let mode = parse_mode(doc);
    let section = doc.get("config").and_then(Value::as_object).ok_or_else(|| bad("missing config section"))?;
    let mut out = BTreeMap::new();
    for (key, val) in section {
        let om = label_to_set(key)?;
        let primal = parse_matrix(val.get("primal").ok_or_else(|| bad(format!("vertex {key}: missing primal")))?, mode)?;
        let dual = match val.get("dual") {
            Some(d) => parse_matrix(d, mode)?,
            None => {
                let adj = primal.adjugate();
                if adj.is_zero() {
                    return Err(bad(format!(
                        "vertex {key}: rank-1 primal needs a supplied dual partner"
                    )));
                }
                adj
            }
        };
        out.insert(om, CompleteConic { primal, dual });
    }
    Ok(out)
}

pub fn label_to_set(label: &str) -> DocResult<IndexSet> {
    let inner = label
        .strip_prefix("S_{")
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| bad(format!("bad vertex label {label:?}")))?;
    let mut idx = Vec::new();
    for c in inner.chars() {
        let d = c.to_digit(10).ok_or_else(|| bad(format!("bad vertex label {label:?}")))? as usize;
        if !(1..=4).contains(&d) {
            return Err(bad(format!("vertex index out of range in {label:?}")));
        }
        idx.push(d);
    }
    Ok(IndexSet::from_indices(&idx))
}

/// Serializes a built lattice into the cube document: vertices, chords,
/// scalars, face conics, diagonals and face points.
pub fn lattice_to_value(lat: &PenroseLattice, cmp: &penrose_core::Comparator) -> Value {
    let mut vertices = Map::new();
    for (om, v) in &lat.vertices {
        vertices.insert(
            om.label(),
            if v.poly.is_zero() {
                Value::Null
            } else {
                matrix_to_value(&penrose_core::poly_to_sym(&v.poly).expect("degree 2"))
            },
        );
    }
    let mut chords = Map::new();
    for ((om, k), c) in &lat.chords {
        let digits: String = om.indices().iter().map(|i| i.to_string()).collect();
        chords.insert(format!("p_{{{digits}}},{k}"), vector_to_value(&c.linear_coeffs()));
    }
    let mut f = Map::new();
    for (om, s) in &lat.f {
        f.insert(om.label().replace("S_", "f_"), scalar_to_value(s));
    }
    let mut faces = Vec::new();
    for (base, j, k) in lat.faces() {
        let entry = match lat.face_point(base, j, k, cmp) {
            Ok(report) => {
                let point = report.point.as_ref().map(|p| vector_to_value(&p.normalize().0)).unwrap_or(Value::Null);
                json!({
                    "base": base.label(),
                    "free": [j, k],
                    "concurrent": report.concurrent,
                    "point": point,
                    "notes": report.notes,
                })
            }
            Err(e) => json!({
                "base": base.label(),
                "free": [j, k],
                "concurrent": Value::Null,
                "point": Value::Null,
                "notes": [format!("{e}")],
            }),
        };
        faces.push(entry);
    }
    json!({
        "vertices": Value::Object(vertices),
        "chords": Value::Object(chords),
        "f": Value::Object(f),
        "faces": faces,
    })
}

/// Serializes a config map.
pub fn config_to_value(config: &BTreeMap<IndexSet, CompleteConic>) -> Value {
    let mut obj = Map::new();
    for (om, c) in config {
        obj.insert(
            om.label(),
            json!({
                "primal": matrix_to_value(&c.primal),
                "dual": if c.dual.is_zero() { Value::Null } else { matrix_to_value(&c.dual) },
            }),
        );
    }
    Value::Object(obj)
}

pub fn read_document(path: &std::path::Path) -> DocResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

pub fn write_document(path: &std::path::Path, doc: &Value) -> DocResult<()> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| bad(format!("{e}")))?;
    std::fs::write(path, text + "\n").map_err(|e| bad(format!("{}: {e}", path.display())))
}

//! State, tensor and matrix files.
//!
//! ```json
//! { "format_version": 1, "kind": "pure", "dims": [2, 2], "data": [[0.7071067811865476, 0], ...] }
//! ```
//!
//! `kind` is `pure` (amplitudes in canonical tensor order, first index
//! fastest), `mixed` (density matrix, row-major, ket order), `tensor` (raw
//! tensor, canonical order, no normalization) or `matrix` (square matrix,
//! row-major; `dims` gives the party dimensions). Mixed-state coefficient
//! tensors use the Gell-Mann order identity, symmetric, antisymmetric,
//! diagonal; that order is part of format version 1.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qudit_equiv::state::{density_to_tensor, pure_to_tensor, tensor_to_amplitudes, QuantumState};
use qudit_equiv::{Matrix, Tensor};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug)]
pub struct FileError {
    pub path: PathBuf,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}: {}", self.path.display(), l, self.message),
            None => write!(f, "{}: {}", self.path.display(), self.message),
        }
    }
}

impl std::error::Error for FileError {}

#[derive(Debug, Serialize, Deserialize)]
struct RawFile {
    format_version: u32,
    kind: String,
    dims: Vec<usize>,
    data: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, f64>>,
}

/// Contents of a parsed file.
#[derive(Debug, Clone)]
pub enum Loaded {
    State(QuantumState),
    Tensor(Tensor),
    Matrix { dims: Vec<usize>, matrix: Matrix },
}

impl Loaded {
    /// Coefficient tensor: amplitudes for pure states, Gell-Mann
    /// coefficients for mixed states.
    pub fn tensor(&self) -> Result<Tensor, String> {
        match self {
            Loaded::State(s @ QuantumState::Pure { .. }) => pure_to_tensor(s).map_err(|e| e.to_string()),
            Loaded::State(s) => density_to_tensor(s).map_err(|e| e.to_string()),
            Loaded::Tensor(t) => Ok(t.clone()),
            Loaded::Matrix { .. } => Err("expected a state or tensor file, found a matrix".into()),
        }
    }
}

/// 1-based line of the first occurrence of `"key"`, for semantic errors.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

fn complex(data: &[[f64; 2]]) -> Vec<Complex64> {
    data.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

pub fn parse(text: &str, path: &Path) -> Result<Loaded, FileError> {
    let err = |line: Option<usize>, message: String| FileError { path: path.to_path_buf(), line, message };
    let raw: RawFile = serde_json::from_str(text).map_err(|e| err(Some(e.line()), e.to_string()))?;
    if raw.format_version != FORMAT_VERSION {
        return Err(err(
            line_of(text, "format_version"),
            format!("unsupported format_version {} (expected {FORMAT_VERSION})", raw.format_version),
        ));
    }
    if raw.dims.is_empty() || raw.dims.contains(&0) {
        return Err(err(line_of(text, "dims"), format!("invalid dims {:?}", raw.dims)));
    }
    if raw.data.iter().flatten().any(|x| !x.is_finite()) {
        return Err(err(line_of(text, "data"), "non-finite value in data".into()));
    }
    let total: usize = raw.dims.iter().product();
    let data_line = line_of(text, "data");
    let expect_len = |n: usize| -> Result<(), FileError> {
        if raw.data.len() != n {
            return Err(err(data_line, format!("{} entries in data, expected {n} for dims {:?}", raw.data.len(), raw.dims)));
        }
        Ok(())
    };
    match raw.kind.as_str() {
        "pure" => {
            expect_len(total)?;
            let t = Tensor::new(raw.dims.clone(), complex(&raw.data)).map_err(|e| err(data_line, e.to_string()))?;
            let s = QuantumState::pure(raw.dims, tensor_to_amplitudes(&t)).map_err(|e| err(data_line, e.to_string()))?;
            Ok(Loaded::State(s))
        }
        "mixed" => {
            expect_len(total * total)?;
            let rho = Matrix::from_row_slice(total, total, &complex(&raw.data));
            let s = QuantumState::mixed(raw.dims, rho).map_err(|e| err(data_line, e.to_string()))?;
            Ok(Loaded::State(s))
        }
        "tensor" => {
            expect_len(total)?;
            let t = Tensor::new(raw.dims, complex(&raw.data)).map_err(|e| err(data_line, e.to_string()))?;
            Ok(Loaded::Tensor(t))
        }
        "matrix" => {
            expect_len(total * total)?;
            let matrix = Matrix::from_row_slice(total, total, &complex(&raw.data));
            Ok(Loaded::Matrix { dims: raw.dims, matrix })
        }
        other => Err(err(line_of(text, "kind"), format!("unknown kind {other:?} (pure, mixed, tensor or matrix)"))),
    }
}

pub fn load(path: &Path) -> Result<Loaded, FileError> {
    let text = std::fs::read_to_string(path).map_err(|e| FileError { path: path.to_path_buf(), line: None, message: e.to_string() })?;
    parse(&text, path)
}

fn pairs(values: impl Iterator<Item = Complex64>) -> Vec<[f64; 2]> {
    values.map(|z| [z.re, z.im]).collect()
}

fn render(raw: &RawFile) -> String {
    let mut s = serde_json::to_string_pretty(raw).expect("serializable");
    s.push('\n');
    s
}

/// File text for a state; `params` are stored for reference only.
pub fn state_to_string(s: &QuantumState, params: Option<BTreeMap<String, f64>>) -> String {
    let (kind, data) = match s {
        QuantumState::Pure { .. } => {
            let t = pure_to_tensor(s).expect("valid pure state");
            ("pure", pairs(t.data().iter().copied()))
        }
        QuantumState::Mixed { rho, .. } => {
            let n = rho.nrows();
            ("mixed", pairs((0..n).flat_map(|r| (0..n).map(move |c| rho[(r, c)]))))
        }
    };
    render(&RawFile { format_version: FORMAT_VERSION, kind: kind.into(), dims: s.dims().to_vec(), data, params })
}

pub fn matrix_to_string(dims: &[usize], m: &Matrix) -> String {
    let n = m.nrows();
    let data = pairs((0..n).flat_map(|r| (0..n).map(move |c| m[(r, c)])));
    render(&RawFile { format_version: FORMAT_VERSION, kind: "matrix".into(), dims: dims.to_vec(), data, params: None })
}

pub fn tensor_to_string(t: &Tensor) -> String {
    render(&RawFile {
        format_version: FORMAT_VERSION,
        kind: "tensor".into(),
        dims: t.dims().to_vec(),
        data: pairs(t.data().iter().copied()),
        params: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qudit_equiv::fixtures::{ghz_partner, mixed_pair};

    #[test]
    fn roundtrip_pure_and_mixed() {
        let p = ghz_partner().unwrap();
        let text = state_to_string(&p, None);
        let Loaded::State(back) = parse(&text, Path::new("p.state")).unwrap() else { panic!() };
        assert_eq!(back, p);
        let (rho, _) = mixed_pair(3.0, 5.0, 7.0).unwrap();
        let text = state_to_string(&rho, None);
        let Loaded::State(back) = parse(&text, Path::new("r.state")).unwrap() else { panic!() };
        // the constructor renormalizes the trace, which may move the last bit
        assert!((back.density() - rho.density()).iter().all(|z| z.norm() <= 1e-16));
    }

    #[test]
    fn canonical_order_on_disk() {
        // |001> has ket index 1 but canonical offset 4 (first index fastest)
        let text = state_to_string(&ghz_partner().unwrap(), None);
        let raw: RawFile = serde_json::from_str(&text).unwrap();
        assert_eq!(raw.data[4], [0.5, 0.0]);
        assert_eq!(raw.data[1], [0.0, 0.0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "{\n  \"format_version\": 1,\n  \"kind\": \"pure\",\n  \"dims\": [2],\n  \"data\": [[1, 0], [0 0]]\n}\n";
        let e = parse(bad, Path::new("x")).unwrap_err();
        assert_eq!(e.line, Some(5));
        let short = "{\n  \"format_version\": 1,\n  \"kind\": \"pure\",\n  \"dims\": [2, 2],\n  \"data\": [[1, 0]]\n}\n";
        let e = parse(short, Path::new("x")).unwrap_err();
        assert_eq!(e.line, Some(5));
        assert!(e.to_string().starts_with("x:5: 1 entries"));
        let norm = "{\"format_version\": 1, \"kind\": \"pure\", \"dims\": [2], \"data\": [[1, 0], [1, 0]]}";
        assert!(parse(norm, Path::new("x")).unwrap_err().message.contains("norm"));
        let kind = "{\"format_version\": 1, \"kind\": \"qubit\", \"dims\": [2], \"data\": [[1, 0], [0, 0]]}";
        assert!(parse(kind, Path::new("x")).unwrap_err().message.contains("unknown kind"));
    }
}

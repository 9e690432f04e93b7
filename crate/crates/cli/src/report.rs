//! Text and JSON rendering shared by the subcommands.

use num_complex::Complex64;
use qudit_equiv::equivalence::{Certificate, Diagnostics, InvariantValue, LocalWitness, PivotEvidence, WitnessMode};
use qudit_equiv::Matrix;
use serde_json::{json, Value};

/// Values this close to zero print as `0`.
const PRINT_ZERO: f64 = 1e-14;

fn fmt_real(x: f64) -> String {
    let x = if x.abs() < PRINT_ZERO { 0.0 } else { x };
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let s = format!("{x:.10}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `3`, `-0.5`, `0.7071067812i`, `1-2i`.
pub fn fmt_complex(z: Complex64) -> String {
    let re = if z.re.abs() < PRINT_ZERO { 0.0 } else { z.re };
    let im = if z.im.abs() < PRINT_ZERO { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt_real(re),
        (true, false) => format!("{}i", fmt_real(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", fmt_real(re), fmt_real(im.abs()))
        }
    }
}

/// Rows of right-aligned entries, each line indented by `indent`.
pub fn fmt_matrix(m: &Matrix, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| fmt_complex(m[(r, c)])).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("{indent}[ {} ]\n", line.join("  ")));
    }
    out
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.nrows()).map(|r| (0..m.ncols()).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect()).collect())
}

/// Inverse of [`matrix_json`].
pub fn matrix_from_json(v: &Value) -> Option<Matrix> {
    let rows = v.as_array()?;
    let ncols = rows.first()?.as_array()?.len();
    let mut data = Vec::with_capacity(rows.len() * ncols);
    for row in rows {
        let row = row.as_array()?;
        if row.len() != ncols {
            return None;
        }
        for e in row {
            let e = e.as_array()?;
            data.push(Complex64::new(e.first()?.as_f64()?, e.get(1)?.as_f64()?));
        }
    }
    Some(Matrix::from_row_slice(rows.len(), ncols, &data))
}

pub fn mode_name(mode: WitnessMode) -> &'static str {
    match mode {
        WitnessMode::Unitary => "unitary",
        WitnessMode::Invertible => "invertible",
    }
}

pub fn witness_json(w: &LocalWitness) -> Value {
    json!({
        "mode": mode_name(w.mode),
        "matrices": w.matrices.iter().map(matrix_json).collect::<Vec<_>>(),
    })
}

pub fn witness_text(w: &LocalWitness) -> String {
    let mut out = format!("witness ({}):\n", mode_name(w.mode));
    for (k, m) in w.matrices.iter().enumerate() {
        out.push_str(&format!("  M_{} =\n{}", k + 1, fmt_matrix(m, "    ")));
    }
    out
}

pub fn pivot_json(p: &PivotEvidence) -> Value {
    json!({
        "mode": p.mode + 1,
        "residual": p.residual,
        "rank_gaps": p.rank_gaps,
        "q_dims": p.q_dims,
        "p": matrix_json(&p.p),
        "q": matrix_json(&p.q),
    })
}

pub fn pivot_text(p: &PivotEvidence) -> String {
    format!(
        "pivot mode {}: unfolding residual {:e}, Q factors {:?}, realignment gaps {}\n",
        p.mode + 1,
        p.residual,
        p.q_dims,
        fmt_list(&p.rank_gaps)
    )
}

pub fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    format!("[{}]", items.join(", "))
}

fn value_json(v: &InvariantValue) -> Value {
    match v {
        InvariantValue::Rank(r) => json!(r),
        InvariantValue::Values(xs) => json!(xs),
    }
}

fn value_text(v: &InvariantValue) -> String {
    match v {
        InvariantValue::Rank(r) => r.to_string(),
        InvariantValue::Values(xs) => fmt_list(xs),
    }
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "invariant": c.invariant.name(),
        "mode": c.mode.map(|m| m + 1),
        "left": value_json(&c.left),
        "right": value_json(&c.right),
    })
}

pub fn certificate_text(c: &Certificate) -> String {
    let at = c.mode.map(|m| format!(" of mode {}", m + 1)).unwrap_or_default();
    format!(
        "certificate: {}{at} differs\n  A: {}\n  B: {}\n",
        c.invariant.name(),
        value_text(&c.left),
        value_text(&c.right)
    )
}

pub fn diagnostics_json(d: &Diagnostics) -> Value {
    json!({
        "mode_gaps": d.mode_gaps,
        "best_residual": d.best_residual,
        "cp_fits": d.cp_fits.map(|(r, a, b)| json!({"rank": r, "fit_a": a, "fit_b": b})),
        "notes": d.notes,
    })
}

pub fn diagnostics_text(d: &Diagnostics) -> String {
    let mut out = format!("best residual: {:e}\n", d.best_residual);
    if !d.mode_gaps.is_empty() {
        out.push_str(&format!("mode gaps: {}\n", fmt_list(&d.mode_gaps)));
    }
    if let Some((r, a, b)) = d.cp_fits {
        out.push_str(&format!("CP fits at rank {r}: A {a:.12}, B {b:.12}\n"));
    }
    for n in &d.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

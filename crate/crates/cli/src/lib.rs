//! Command-line front end for `qudit-equiv`.
//!
//! [`run`] parses an argument vector, executes one subcommand and returns the
//! exit code with the report, so the binary and the tests share one path.
//! Exit codes: 0 equivalent or pass, 2 not equivalent or certificate,
//! 3 inconclusive, 1 usage or I/O error.

pub mod report;
pub mod statefile;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qudit_equiv::cp::{als_fit, AlsOptions};
use qudit_equiv::equivalence::{
    generate_equivalent_pair, mixed_lu_check, mixed_slocc_necessary, pure_lu_check, pure_slocc_check, CheckOptions,
    MixedSloccOutcome, Verdict, WitnessMode,
};
use qudit_equiv::fixtures::{ghz, ghz_partner, mixed_pair, mixed_pair_spectrum};
use qudit_equiv::kron::{factorize_multiparty, is_kron};
use qudit_equiv::linalg::eig_hermitian;
use qudit_equiv::state::{QuantumState, StateKind};
use qudit_equiv::tensor::unfold;

use report::*;
use statefile::Loaded;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_EQUIVALENT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Environment variable that replaces the default seed when `--seed` is absent.
pub const SEED_ENV: &str = "QE_SEED";

#[derive(Debug, Parser)]
#[command(name = "qequiv", version, about = "SLOCC and LU equivalence of multipartite qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Slocc,
    Lu,
    SloccMixed,
    LuMixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Example {
    Ghz,
    Mixed,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide equivalence of the states in files A and B.
    Check {
        kind: CheckKind,
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Fixture parameters, e.g. a=3,b=5,c=7; echoed in the report, and
        /// for lu-mixed with a, b, c set, A's spectrum is compared to the
        /// fixture's.
        #[arg(long)]
        params: Option<String>,
        /// slocc-mixed only: also search for operators relating the
        /// coefficient tensors.
        #[arg(long)]
        search: bool,
    },
    /// Print the mode-n unfolding (1-based mode).
    Unfold {
        file: PathBuf,
        #[arg(long)]
        mode: usize,
        #[arg(long)]
        json: bool,
    },
    /// Fit a rank-R CP model by alternating least squares.
    Cp {
        file: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Split a matrix into a Kronecker product of per-party factors.
    Factorize {
        file: PathBuf,
        /// Party dimensions; defaults to the file's dims.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Write the reference fixtures into a directory.
    Examples {
        which: Example,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write a seeded equivalent pair and its witness.
    GenPair {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        mode: CheckKind,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// Report for standard output.
    pub stdout: String,
    /// Error or usage message for standard error.
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(message: impl Into<String>) -> Self {
        Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: message.into() }
    }
}

type CmdResult = std::result::Result<Outcome, String>;

/// Runs one command line, reading the default seed from `QE_SEED`.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_env_seed(argv, std::env::var(SEED_ENV).ok())
}

/// [`run`] with the `QE_SEED` value passed explicitly.
pub fn run_with_env_seed<I, S>(argv: I, env_seed: Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::error(text) } else { Outcome::report(EXIT_OK, text) };
        }
    };
    let result = (|| -> CmdResult {
        let seed_of = |flag: Option<u64>| resolve_seed(flag, env_seed.as_deref());
        match cli.command {
            Command::Check { kind, a, b, tol, seed, json, params, search } => {
                check(kind, &a, &b, tol, seed_of(seed)?, json, params.as_deref(), search)
            }
            Command::Unfold { file, mode, json } => unfold_cmd(&file, mode, json),
            Command::Cp { file, rank, restarts, max_iters, seed, json } => {
                cp_cmd(&file, rank, restarts, max_iters, seed_of(seed)?, json)
            }
            Command::Factorize { file, dims, tol, json } => factorize_cmd(&file, dims, tol, json),
            Command::Examples { which, params, out } => examples_cmd(which, params.as_deref(), &out),
            Command::GenPair { dims, mode, seed, out } => gen_pair_cmd(&dims, mode, seed_of(seed)?, &out),
        }
    })();
    result.unwrap_or_else(Outcome::error)
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, String> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v.trim().parse().map_err(|_| format!("{SEED_ENV}={v:?} is not an unsigned integer")),
        (None, None) => Ok(0),
    }
}

/// `a=3,b=5` into a map.
fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("parameter {item:?} is not key=value"))?;
        let v: f64 = v.trim().parse().map_err(|_| format!("parameter {k} has non-numeric value {v:?}"))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn load(path: &Path) -> Result<Loaded, String> {
    statefile::load(path).map_err(|e| e.to_string())
}

fn load_state(path: &Path) -> Result<QuantumState, String> {
    match load(path)? {
        Loaded::State(s) => Ok(s),
        _ => Err(format!("{}: expected a pure or mixed state file", path.display())),
    }
}

fn emit(code: i32, as_json: bool, text: String, value: Value) -> Outcome {
    if as_json {
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        Outcome::report(code, s)
    } else {
        Outcome::report(code, text)
    }
}

fn kind_name(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::Slocc => "slocc",
        CheckKind::Lu => "lu",
        CheckKind::SloccMixed => "slocc-mixed",
        CheckKind::LuMixed => "lu-mixed",
    }
}

#[allow(clippy::too_many_arguments)]
fn check(
    kind: CheckKind,
    a_path: &Path,
    b_path: &Path,
    tol: f64,
    seed: u64,
    as_json: bool,
    params: Option<&str>,
    search: bool,
) -> CmdResult {
    let a = load_state(a_path)?;
    let b = load_state(b_path)?;
    let params = params.map(parse_params).transpose()?;
    if matches!(kind, CheckKind::Slocc | CheckKind::Lu) && !matches!((&a, &b), (QuantumState::Pure { .. }, QuantumState::Pure { .. })) {
        return Err(format!("check {} needs two pure states; use {}-mixed for density matrices", kind_name(kind), kind_name(kind)));
    }
    let opts = CheckOptions::with_tol(tol).with_seed(seed);
    let mut value = json!({
        "command": "check",
        "check": kind_name(kind),
        "a": a_path.display().to_string(),
        "b": b_path.display().to_string(),
        "dims": a.dims(),
        "seed": seed,
        "tolerances": {"tol": opts.tol, "value_tol": opts.value_tol, "cluster_tol": opts.cluster_tol},
    });
    let mut text = format!("check {}: {} vs {}\n", kind_name(kind), a_path.display(), b_path.display());
    if let Some(p) = &params {
        value["params"] = json!(p);
        let listed: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
        text.push_str(&format!("params: {}\n", listed.join(", ")));
        if let (CheckKind::LuMixed, Some(&pa), Some(&pb), Some(&pc)) = (kind, p.get("a"), p.get("b"), p.get("c")) {
            let expected = mixed_pair_spectrum(pa, pb, pc);
            let got = eig_hermitian(&a.density()).map_err(|e| e.to_string())?.values;
            let dev = if got.len() == expected.len() {
                got.iter().zip(&expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            value["fixture_spectrum_deviation"] = json!(dev);
            text.push_str(&format!("fixture spectrum deviation of A: {dev:e}\n"));
        }
    }
    text.push_str(&format!("seed {seed}, tol {:e}\n", opts.tol));

    let started = Instant::now();
    let verdict = match kind {
        CheckKind::Slocc => pure_slocc_check(&a, &b, &opts),
        CheckKind::Lu => pure_lu_check(&a, &b, &opts),
        CheckKind::LuMixed => mixed_lu_check(&a, &b, &opts),
        CheckKind::SloccMixed => {
            let outcome = mixed_slocc_necessary(&a, &b, search, &opts).map_err(|e| e.to_string())?;
            value["elapsed_seconds"] = json!(started.elapsed().as_secs_f64());
            return Ok(mixed_slocc_report(outcome, value, text, as_json));
        }
    }
    .map_err(|e| e.to_string())?;
    value["elapsed_seconds"] = json!(started.elapsed().as_secs_f64());
    value["outcome"] = json!(verdict.label());
    text.push_str(&format!("outcome: {}\n", verdict.label()));
    let code = match &verdict {
        Verdict::Equivalent(e) => {
            value["residual"] = json!(e.residual);
            value["witness"] = witness_json(&e.witness);
            text.push_str(&format!("residual: {:e}\n", e.residual));
            if let Some(p) = &e.pivot {
                value["pivot"] = pivot_json(p);
                text.push_str(&pivot_text(p));
            }
            if !e.mode_gaps.is_empty() {
                value["mode_gaps"] = json!(e.mode_gaps);
                text.push_str(&format!("realignment gaps of P: {}\n", fmt_list(&e.mode_gaps)));
            }
            text.push_str(&witness_text(&e.witness));
            EXIT_OK
        }
        Verdict::NotEquivalent(c) => {
            value["certificate"] = certificate_json(c);
            text.push_str(&certificate_text(c));
            EXIT_NOT_EQUIVALENT
        }
        Verdict::Inconclusive(d) => {
            value["diagnostics"] = diagnostics_json(d);
            text.push_str(&diagnostics_text(d));
            EXIT_INCONCLUSIVE
        }
    };
    Ok(emit(code, as_json, text, value))
}

fn mixed_slocc_report(outcome: MixedSloccOutcome, mut value: Value, mut text: String, as_json: bool) -> Outcome {
    match outcome {
        MixedSloccOutcome::Pass { unfolding_ranks, density_rank, evidence } => {
            value["outcome"] = json!("Pass");
            value["unfolding_ranks"] = json!(unfolding_ranks);
            value["density_rank"] = json!(density_rank);
            text.push_str("outcome: Pass (necessary conditions hold; not an equivalence claim)\n");
            text.push_str(&format!("coefficient unfolding ranks: {unfolding_ranks:?}\ndensity rank: {density_rank}\n"));
            if let Some(ev) = evidence {
                value["evidence"] = json!({"residual": ev.residual, "operators": witness_json(&ev.operators)});
                text.push_str(&format!("coefficient tensor operators, residual {:e}\n", ev.residual));
                text.push_str(&witness_text(&ev.operators));
            }
            emit(EXIT_OK, as_json, text, value)
        }
        MixedSloccOutcome::Certificate(c) => {
            value["outcome"] = json!("Certificate");
            value["certificate"] = certificate_json(&c);
            text.push_str("outcome: Certificate\n");
            text.push_str(&certificate_text(&c));
            emit(EXIT_NOT_EQUIVALENT, as_json, text, value)
        }
    }
}

fn unfold_cmd(path: &Path, mode: usize, as_json: bool) -> CmdResult {
    let t = load(path)?.tensor()?;
    if mode == 0 || mode > t.order() {
        return Err(format!("--mode {mode} is out of range 1..={}", t.order()));
    }
    let m = unfold(&t, mode - 1).map_err(|e| e.to_string())?;
    let text = format!("X_({mode}) ({}x{}):\n{}", m.nrows(), m.ncols(), fmt_matrix(&m, ""));
    let value = json!({"command": "unfold", "mode": mode, "dims": t.dims(), "matrix": matrix_json(&m)});
    Ok(emit(EXIT_OK, as_json, text, value))
}

fn cp_cmd(path: &Path, rank: usize, restarts: usize, max_iters: usize, seed: u64, as_json: bool) -> CmdResult {
    let t = load(path)?.tensor()?;
    if rank == 0 {
        return Err("--rank must be at least 1".into());
    }
    let opts = AlsOptions { restarts, max_iters, seed, ..Default::default() };
    let f = als_fit(&t, rank, &opts).map_err(|e| e.to_string())?;
    let mut text = format!("rank {rank} fit {:.12} (restarts {restarts}, seed {seed})\n", f.fit);
    for (k, a) in f.factors.iter().enumerate() {
        text.push_str(&format!("A_{} =\n{}", k + 1, fmt_matrix(a, "  ")));
    }
    let value = json!({
        "command": "cp",
        "rank": rank,
        "fit": f.fit,
        "seed": seed,
        "restarts": restarts,
        "factors": f.factors.iter().map(matrix_json).collect::<Vec<_>>(),
    });
    Ok(emit(EXIT_OK, as_json, text, value))
}

fn factorize_cmd(path: &Path, dims: Option<Vec<usize>>, tol: f64, as_json: bool) -> CmdResult {
    let (file_dims, m) = match load(path)? {
        Loaded::Matrix { dims, matrix } => (dims, matrix),
        Loaded::State(s @ QuantumState::Mixed { .. }) => (s.dims().to_vec(), s.density()),
        _ => return Err(format!("{}: expected a matrix or mixed state file", path.display())),
    };
    let dims = dims.unwrap_or(file_dims);
    let test = is_kron(&m, &dims, tol).map_err(|e| e.to_string())?;
    let mut value = json!({"command": "factorize", "dims": dims, "tol": tol, "rank_gaps": test.rank_gaps});
    let mut text = format!("realignment gaps: {}\n", fmt_list(&test.rank_gaps));
    if !test.is_kron {
        value["outcome"] = json!("NotProduct");
        text.push_str(&format!("not a Kronecker product over {dims:?} at tol {tol:e}\n"));
        return Ok(emit(EXIT_NOT_EQUIVALENT, as_json, text, value));
    }
    let f = factorize_multiparty(&m, &dims, tol).map_err(|e| e.to_string())?;
    value["outcome"] = json!("Product");
    value["residual"] = json!(f.residual);
    value["invertible"] = json!(f.invertible);
    value["factors"] = json!(f.factors.iter().map(matrix_json).collect::<Vec<_>>());
    text.push_str(&format!("product over {dims:?}, residual {:e}, invertible {}\n", f.residual, f.invertible));
    for (k, a) in f.factors.iter().enumerate() {
        text.push_str(&format!("m_{} =\n{}", k + 1, fmt_matrix(a, "  ")));
    }
    Ok(emit(EXIT_OK, as_json, text, value))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(path)
}

fn examples_cmd(which: Example, params: Option<&str>, out: &Path) -> CmdResult {
    let err = |e: qudit_equiv::Error| e.to_string();
    let written = match which {
        Example::Ghz => {
            if params.is_some() {
                return Err("examples ghz takes no parameters".into());
            }
            vec![
                write_file(out, "ghz.state", &statefile::state_to_string(&ghz(3).map_err(err)?, None))?,
                write_file(out, "psi.state", &statefile::state_to_string(&ghz_partner().map_err(err)?, None))?,
            ]
        }
        Example::Mixed => {
            let mut p = parse_params(params.unwrap_or("a=3,b=5,c=7"))?;
            for key in p.keys() {
                if !["a", "b", "c"].contains(&key.as_str()) {
                    return Err(format!("unknown parameter {key:?} (expected a, b, c)"));
                }
            }
            for (key, default) in [("a", 3.0), ("b", 5.0), ("c", 7.0)] {
                p.entry(key.to_string()).or_insert(default);
            }
            if p.values().any(|&v| !(v > 0.0 && v.is_finite())) {
                return Err("parameters a, b, c must be positive".into());
            }
            let (rho, rho_p) = mixed_pair(p["a"], p["b"], p["c"]).map_err(err)?;
            vec![
                write_file(out, "rho.state", &statefile::state_to_string(&rho, Some(p.clone())))?,
                write_file(out, "rhoprime.state", &statefile::state_to_string(&rho_p, Some(p)))?,
            ]
        }
    };
    let text: String = written.iter().map(|p| format!("wrote {}\n", p.display())).collect();
    Ok(Outcome::report(EXIT_OK, text))
}

fn gen_pair_cmd(dims: &[usize], mode: CheckKind, seed: u64, out: &Path) -> CmdResult {
    let (kind, wmode) = match mode {
        CheckKind::Lu => (StateKind::Pure, WitnessMode::Unitary),
        CheckKind::Slocc => (StateKind::Pure, WitnessMode::Invertible),
        CheckKind::LuMixed => (StateKind::Mixed, WitnessMode::Unitary),
        CheckKind::SloccMixed => (StateKind::Mixed, WitnessMode::Invertible),
    };
    let pair = generate_equivalent_pair(dims, kind, wmode, seed).map_err(|e| e.to_string())?;
    let witness = json!({
        "format_version": statefile::FORMAT_VERSION,
        "mode": kind_name(mode),
        "seed": seed,
        "witness": witness_json(&pair.witness),
    });
    let mut w = serde_json::to_string_pretty(&witness).expect("serializable");
    w.push('\n');
    let written = [
        write_file(out, "a.state", &statefile::state_to_string(&pair.a, None))?,
        write_file(out, "b.state", &statefile::state_to_string(&pair.b, None))?,
        write_file(out, "witness.json", &w)?,
    ];
    let text: String = written.iter().map(|p| format!("wrote {}\n", p.display())).collect();
    Ok(Outcome::report(EXIT_OK, text))
}

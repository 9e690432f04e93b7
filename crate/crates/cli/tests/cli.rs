use std::path::Path;
use std::process::Command;

use qequiv_cli::report::matrix_from_json;
use qequiv_cli::statefile::{matrix_to_string, state_to_string};
use qequiv_cli::{run_with_env_seed, Outcome};
use qudit_equiv::fixtures::{ghz, skewed_ghz, w};
use qudit_equiv::linalg::kronecker_all;
use qudit_equiv::random::{ginibre, stream};
use qudit_equiv::state::QuantumState;
use qudit_equiv::Matrix;
use serde_json::Value;

fn qe(args: &[&str]) -> Outcome {
    let argv: Vec<String> = std::iter::once("qequiv").chain(args.iter().copied()).map(String::from).collect();
    run_with_env_seed(argv, None)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_state(dir: &Path, name: &str, st: &QuantumState) -> String {
    let p = dir.join(name);
    std::fs::write(&p, state_to_string(st, None)).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn binary_exit_codes_partition_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_state(dir.path(), "ghz.state", &ghz(3).unwrap());
    let sk = write_state(dir.path(), "skew.state", &skewed_ghz(std::f64::consts::PI / 5.0).unwrap());
    let wst = write_state(dir.path(), "w.state", &w().unwrap());
    let bin = env!("CARGO_BIN_EXE_qequiv");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["check", "lu", &g, &g]), Some(0));
    assert_eq!(code(&["check", "lu", &g, &sk]), Some(2));
    assert_eq!(code(&["check", "slocc", &g, &wst]), Some(3));
    assert_eq!(code(&["check", "lu", &g]), Some(1));
    assert_eq!(code(&["check", "lu", &g, "missing.state"]), Some(1));
}

#[test]
fn text_and_json_verdicts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_state(dir.path(), "ghz.state", &ghz(3).unwrap());
    let sk = write_state(dir.path(), "skew.state", &skewed_ghz(0.3).unwrap());
    let wst = write_state(dir.path(), "w.state", &w().unwrap());
    for (kind, b) in [("lu", &sk), ("slocc", &wst), ("slocc", &sk), ("lu", &g)] {
        let text = qe(&["check", kind, &g, b, "--seed", "4"]);
        let json = qe(&["check", kind, &g, b, "--seed", "4", "--json"]);
        assert_eq!(text.code, json.code);
        let v: Value = serde_json::from_str(&json.stdout).unwrap();
        let label = v["outcome"].as_str().unwrap();
        assert!(text.stdout.contains(&format!("outcome: {label}\n")), "{kind}: {}", text.stdout);
        assert_eq!(v["seed"], 4);
        assert_eq!(v["tolerances"]["tol"], 1e-8);
    }
    let cert = qe(&["check", "lu", &g, &sk, "--json"]);
    let v: Value = serde_json::from_str(&cert.stdout).unwrap();
    assert_eq!(v["certificate"]["invariant"], "unfolding singular values");
    let inc = qe(&["check", "slocc", &g, &wst, "--json"]);
    let v: Value = serde_json::from_str(&inc.stdout).unwrap();
    assert_eq!(v["outcome"], "Inconclusive");
    assert!(v["diagnostics"]["cp_fits"]["rank"].is_number());
}

#[test]
fn examples_are_byte_stable_and_check_equivalent() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        assert_eq!(qe(&["examples", "ghz", "--out", s(d.path())]).code, 0);
        assert_eq!(qe(&["examples", "mixed", "--out", s(d.path())]).code, 0);
    }
    for f in ["ghz.state", "psi.state", "rho.state", "rhoprime.state"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap(), "{f}");
    }
    let run = |d: &Path| qe(&["check", "slocc", s(&d.join("ghz.state")), s(&d.join("psi.state")), "--json"]).stdout;
    let (r1, r2) = (run(d1.path()), run(d2.path()));
    let strip = |r: &str| {
        let mut v: Value = serde_json::from_str(r).unwrap();
        for k in ["a", "b", "elapsed_seconds"] {
            v.as_object_mut().unwrap().remove(k);
        }
        v
    };
    assert_eq!(strip(&r1), strip(&r2));
    assert_eq!(strip(&r1)["outcome"], "Equivalent");
    let mixed = qe(&[
        "check",
        "lu-mixed",
        s(&d1.path().join("rho.state")),
        s(&d1.path().join("rhoprime.state")),
        "--params",
        "a=3,b=5,c=7",
    ]);
    assert_eq!(mixed.code, 0, "{}", mixed.stdout);
}

#[test]
fn malformed_files_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.state");
    std::fs::write(&bad, "{\n  \"format_version\": 1,\n  \"kind\": \"pure\",\n  \"dims\": [2],\n  \"data\": [[1, 0], [0, 0],]\n}\n").unwrap();
    let good = write_state(dir.path(), "ghz.state", &ghz(3).unwrap());
    let out = qe(&["check", "lu", &good, s(&bad)]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("bad.state:5:"), "{}", out.stderr);
    let out = qe(&["unfold", s(&bad), "--mode", "1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn mismatched_kinds_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qe(&["examples", "mixed", "--out", s(dir.path())]).code, 0);
    let rho = dir.path().join("rho.state");
    let out = qe(&["check", "slocc", s(&rho), s(&rho)]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("slocc-mixed"));
    assert_eq!(qe(&["examples", "mixed", "--params", "d=2", "--out", s(dir.path())]).code, 1);
}

#[test]
fn slocc_mixed_pass_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qe(&["examples", "mixed", "--out", s(dir.path())]).code, 0);
    let (a, b) = (dir.path().join("rho.state"), dir.path().join("rhoprime.state"));
    let out = qe(&["check", "slocc-mixed", s(&a), s(&b), "--json"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "Pass");
    assert_eq!(v["density_rank"], 7);
    let projector = QuantumState::mixed(vec![2; 3], ghz(3).unwrap().density()).unwrap();
    let pure = write_state(dir.path(), "ghz_rho.state", &projector);
    let out = qe(&["check", "slocc-mixed", s(&a), &pure, "--json"]);
    assert_eq!(out.code, 2);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["outcome"], "Certificate");
    assert_eq!(v["certificate"]["invariant"], "density matrix rank");
}

#[test]
fn env_seed_is_overridden_by_flag() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_state(dir.path(), "ghz.state", &ghz(3).unwrap());
    let seed_of = |args: &[&str], env: Option<&str>| {
        let argv: Vec<String> = std::iter::once("qequiv").chain(args.iter().copied()).map(String::from).collect();
        let out = run_with_env_seed(argv, env.map(String::from));
        serde_json::from_str::<Value>(&out.stdout).unwrap()["seed"].as_u64().unwrap()
    };
    assert_eq!(seed_of(&["check", "lu", &g, &g, "--json"], None), 0);
    assert_eq!(seed_of(&["check", "lu", &g, &g, "--json"], Some("11")), 11);
    assert_eq!(seed_of(&["check", "lu", &g, &g, "--json", "--seed", "5"], Some("11")), 5);
    let argv = ["qequiv", "check", "lu", &g, &g].map(String::from);
    assert_eq!(run_with_env_seed(argv, Some("x".into())).code, 1);
}

#[test]
fn gen_pair_files_check_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["lu", "slocc", "lu-mixed"] {
        let out_dir = dir.path().join(mode);
        let out = qe(&["gen-pair", "--dims", "2,3", "--mode", mode, "--seed", "9", "--out", s(&out_dir)]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let res = qe(&["check", mode, s(&out_dir.join("a.state")), s(&out_dir.join("b.state"))]);
        assert_eq!(res.code, 0, "{mode}: {}", res.stdout);
        let wj: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("witness.json")).unwrap()).unwrap();
        assert_eq!(wj["witness"]["matrices"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn factorize_and_cp_commands() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = stream(3, 0);
    let parts = [ginibre(2, 2, &mut rng), ginibre(3, 3, &mut rng)];
    let m = kronecker_all(&parts);
    let prod = dir.path().join("prod.matrix");
    std::fs::write(&prod, matrix_to_string(&[2, 3], &m)).unwrap();
    let out = qe(&["factorize", s(&prod), "--dims", "2,3", "--json"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let fs: Vec<Matrix> = v["factors"].as_array().unwrap().iter().map(|f| matrix_from_json(f).unwrap()).collect();
    let back = kronecker_all(&fs);
    assert!((back - &m).norm() <= 1e-10 * m.norm());
    let noise = dir.path().join("noise.matrix");
    std::fs::write(&noise, matrix_to_string(&[2, 3], &ginibre(6, 6, &mut rng))).unwrap();
    assert_eq!(qe(&["factorize", s(&noise)]).code, 2);
    assert_eq!(qe(&["factorize", s(&noise), "--dims", "4,2"]).code, 1);

    let g = write_state(dir.path(), "ghz.state", &ghz(3).unwrap());
    let out = qe(&["cp", &g, "--rank", "2", "--json"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["fit"].as_f64().unwrap() >= 1.0 - 1e-8);
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
    assert_eq!(qe(&["cp", &g, "--rank", "0"]).code, 1);
}

//! Statistical completeness and soundness on generated equivalent pairs.

use qudit_equiv::equivalence::{
    generate_equivalent_pair, mixed_lu_check, pure_lu_check, pure_slocc_check, verify_mixed_witness, verify_witness,
    CheckOptions, Verdict, WitnessMode,
};
use qudit_equiv::state::{pure_to_tensor, StateKind};

const TRIALS: u64 = 100;

fn rate(dims: &[usize], kind: StateKind, mode: WitnessMode) -> f64 {
    let opts = CheckOptions::default();
    let mut found = 0;
    for seed in 0..TRIALS {
        let p = generate_equivalent_pair(dims, kind, mode, 1000 + seed).unwrap();
        let v = match (kind, mode) {
            (StateKind::Pure, WitnessMode::Unitary) => pure_lu_check(&p.a, &p.b, &opts),
            (StateKind::Pure, WitnessMode::Invertible) => pure_slocc_check(&p.a, &p.b, &opts),
            (StateKind::Mixed, _) => mixed_lu_check(&p.a, &p.b, &opts),
        }
        .unwrap();
        match v {
            Verdict::NotEquivalent(c) => panic!("{dims:?} seed {seed}: certificate {c:?} on an equivalent pair"),
            Verdict::Equivalent(e) => {
                let res = match kind {
                    StateKind::Pure => {
                        let (x, y) = (pure_to_tensor(&p.a).unwrap(), pure_to_tensor(&p.b).unwrap());
                        verify_witness(&x, &y, &e.witness).unwrap().residual
                    }
                    StateKind::Mixed => verify_mixed_witness(&p.a.density(), &p.b.density(), &e.witness).unwrap(),
                };
                assert!(res <= 1e-8, "{dims:?} seed {seed}: residual {res:e}");
                found += 1;
            }
            Verdict::Inconclusive(d) => eprintln!("{dims:?} {mode:?} seed {seed}: inconclusive {d:?}"),
        }
    }
    let r = found as f64 / TRIALS as f64;
    eprintln!("{dims:?} {kind:?} {mode:?}: {found}/{TRIALS}");
    r
}

#[test]
fn pure_lu_pairs() {
    for dims in [vec![2, 2, 2], vec![2, 2, 2, 2], vec![3, 3, 2], vec![3, 3, 3]] {
        assert!(rate(&dims, StateKind::Pure, WitnessMode::Unitary) >= 0.95, "{dims:?}");
    }
}

#[test]
fn pure_slocc_pairs() {
    for dims in [vec![2, 2, 2], vec![2, 2, 2, 2], vec![3, 3, 2], vec![3, 3, 3]] {
        assert!(rate(&dims, StateKind::Pure, WitnessMode::Invertible) >= 0.95, "{dims:?}");
    }
}

#[test]
fn mixed_lu_pairs() {
    for dims in [vec![2, 2, 2], vec![2, 3]] {
        assert!(rate(&dims, StateKind::Mixed, WitnessMode::Unitary) >= 0.95, "{dims:?}");
    }
}

//! Randomized algebraic properties across the crate.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qudit_equiv::cp::{als_fit, als_fit_traced, reconstruct_factors, AlsOptions};
use qudit_equiv::equivalence::{generate_equivalent_pair, pure_lu_check, pure_slocc_check, CheckOptions, Verdict, WitnessMode};
use qudit_equiv::kron::{factorize_bipartite, factorize_multiparty, is_kron};
use qudit_equiv::linalg::{
    bipartite_block, fro, hadamard, khatri_rao, khatri_rao_all, kronecker, kronecker_all, numerical_rank, realign, vec,
};
use qudit_equiv::random::{conditioned_invertible, full_rank_density, ginibre, haar_state, haar_unitary, stream};
use qudit_equiv::state::{
    adjoint_rep, coefficients_of, density_to_tensor, pure_to_tensor, tensor_to_density, QuantumState, StateKind,
};
use qudit_equiv::tensor::{apply_local, fold, frobenius_norm, unfold, Matrix, Tensor, Vector};

fn random_tensor(dims: &[usize], rng: &mut ChaCha8Rng) -> Tensor {
    Tensor::from_fn(dims.to_vec(), |_| qudit_equiv::random::complex_gaussian(rng)).unwrap()
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    fro(&(a - b)) / fro(b).max(1.0)
}

fn dims_strategy(max_order: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=max_order)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn unfold_fold_roundtrip(dims in dims_strategy(4), seed in any::<u64>()) {
        let t = random_tensor(&dims, &mut stream(seed, 0));
        for n in 0..dims.len() {
            prop_assert_eq!(&fold(&unfold(&t, n).unwrap(), n, &dims).unwrap(), &t);
        }
    }

    #[test]
    fn unfolding_of_local_action(dims in dims_strategy(4), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let t = random_tensor(&dims, &mut rng);
        let ops: Vec<Matrix> = dims.iter().map(|&d| ginibre(rng.random_range(1..=3), d, &mut rng)).collect();
        let image = apply_local(&t, &ops).unwrap();
        for n in 0..dims.len() {
            let rest: Vec<Matrix> = (0..dims.len()).rev().filter(|&k| k != n).map(|k| ops[k].clone()).collect();
            let direct = &ops[n] * unfold(&t, n).unwrap() * kronecker_all(&rest).transpose();
            prop_assert!(rel(&direct, &unfold(&image, n).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn local_actions_compose(dims in dims_strategy(4), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let t = random_tensor(&dims, &mut rng);
        let a: Vec<Matrix> = dims.iter().map(|&d| ginibre(d, d, &mut rng)).collect();
        let b: Vec<Matrix> = dims.iter().map(|&d| ginibre(d, d, &mut rng)).collect();
        let ba: Vec<Matrix> = b.iter().zip(&a).map(|(b, a)| b * a).collect();
        let two = apply_local(&apply_local(&t, &a).unwrap(), &b).unwrap();
        let one = apply_local(&t, &ba).unwrap();
        prop_assert!(frobenius_norm(&two.sub(&one).unwrap()) <= 1e-12 * frobenius_norm(&one).max(1.0));
    }

    #[test]
    fn unitaries_keep_norm(dims in dims_strategy(4), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let t = random_tensor(&dims, &mut rng);
        let us: Vec<Matrix> = dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect();
        let n = frobenius_norm(&t);
        prop_assert!((frobenius_norm(&apply_local(&t, &us).unwrap()) - n).abs() <= 1e-12 * n.max(1.0));
    }

    #[test]
    fn mixed_product(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, k in 1usize..4) {
        let mut rng = stream(seed, 0);
        let (a, c) = (ginibre(m, n, &mut rng), ginibre(n, k, &mut rng));
        let (b, d) = (ginibre(k, m, &mut rng), ginibre(m, n, &mut rng));
        let lhs = kronecker(&a, &b) * kronecker(&c, &d);
        prop_assert!(rel(&lhs, &kronecker(&(&a * &c), &(&b * &d))) <= 1e-12);
    }

    #[test]
    fn kron_times_khatri_rao(seed in any::<u64>(), n in 1usize..=4, r in 1usize..4) {
        let mut rng = stream(seed, 0);
        let shapes: Vec<(usize, usize)> = (0..n).map(|_| (rng.random_range(1..=3), rng.random_range(1..=3))).collect();
        let s: Vec<Matrix> = shapes.iter().map(|&(p, q)| ginibre(p, q, &mut rng)).collect();
        let p: Vec<Matrix> = shapes.iter().map(|&(_, q)| ginibre(q, r, &mut rng)).collect();
        let lhs = kronecker_all(&s) * khatri_rao_all(&p.iter().collect::<Vec<_>>()).unwrap();
        let sp: Vec<Matrix> = s.iter().zip(&p).map(|(s, p)| s * p).collect();
        prop_assert!(rel(&lhs, &khatri_rao_all(&sp.iter().collect::<Vec<_>>()).unwrap()) <= 1e-12);
    }

    #[test]
    fn khatri_rao_gram(seed in any::<u64>(), m in 1usize..5, n in 1usize..5, r in 1usize..5) {
        let mut rng = stream(seed, 0);
        let (a, b) = (ginibre(m, r, &mut rng), ginibre(n, r, &mut rng));
        let kr = khatri_rao(&a, &b).unwrap();
        let lhs = kr.transpose() * kr;
        let rhs = hadamard(&(a.transpose() * &a), &(b.transpose() * &b)).unwrap();
        prop_assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn realigned_kron_is_rank_one(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut rng = stream(seed, 0);
        let (a, b) = (ginibre(m, m, &mut rng), ginibre(n, n, &mut rng));
        let r = realign(&kronecker(&a, &b), m, n).unwrap();
        prop_assert!(rel(&r, &(vec(&a) * vec(&b).transpose())) <= 1e-12);
        prop_assert_eq!(numerical_rank(&r, 1e-8).unwrap(), 1);
    }

    #[test]
    fn rank_survives_unitaries(seed in any::<u64>(), d in 2usize..6, k in 1usize..6) {
        let mut rng = stream(seed, 0);
        let k = k.min(d);
        let s = Vector::from_fn(d, |i, _| Complex64::new(if i < k { 1.0 + i as f64 } else { 0.0 }, 0.0));
        let m = haar_unitary(d, &mut rng) * Matrix::from_diagonal(&s) * haar_unitary(d, &mut rng);
        let (u, v) = (haar_unitary(d, &mut rng), haar_unitary(d, &mut rng));
        prop_assert_eq!(numerical_rank(&m, 1e-8).unwrap(), k);
        prop_assert_eq!(numerical_rank(&(u * &m * v), 1e-8).unwrap(), k);
    }

    #[test]
    fn products_factorize_with_unit_gauge(dims in prop::collection::vec(1usize..=3, 2..=3), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let parts: Vec<Matrix> = dims.iter().map(|&d| ginibre(d, d, &mut rng)).collect();
        let m = kronecker_all(&parts);
        let f = factorize_multiparty(&m, &dims, 1e-8).unwrap();
        prop_assert!(rel(&kronecker_all(&f.factors), &m) <= 1e-10);
        let mut product = Complex64::new(1.0, 0.0);
        for (got, want) in f.factors.iter().zip(&parts) {
            let (i, _) = want.iter().enumerate().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).unwrap();
            let c = got.as_slice()[i] / want.as_slice()[i];
            prop_assert!(fro(&(got - want * c)) <= 1e-9 * fro(got));
            product *= c;
        }
        prop_assert!((product - 1.0).norm() <= 1e-9);
        let scaled = &m * Complex64::new(-2.5, 0.7);
        prop_assert!(is_kron(&scaled, &dims, 1e-8).unwrap().is_kron);
    }

    #[test]
    fn non_products_leave_a_residual(seed in any::<u64>(), d1 in 2usize..=3, d2 in 2usize..=3) {
        let m = ginibre(d1 * d2, d1 * d2, &mut stream(seed, 0));
        let t = is_kron(&m, &[d1, d2], 1e-8).unwrap();
        prop_assert!(!t.is_kron);
        let block = bipartite_block(&m, &[d1, d2], 0).unwrap();
        let (_, _, res) = factorize_bipartite(&block, d1, d2).unwrap();
        prop_assert!(res >= 1e-8);
    }

    #[test]
    fn cp_gauge_and_unfolding_identity(seed in any::<u64>(), r in 1usize..4) {
        let mut rng = stream(seed, 0);
        let dims = [2usize, 3, 2];
        let fs: Vec<Matrix> = dims.iter().map(|&d| ginibre(d, r, &mut rng)).collect();
        let t = reconstruct_factors(&fs).unwrap();
        let perm: Vec<usize> = (0..r).rev().collect();
        let scales: Vec<Complex64> = (0..r).map(|_| qudit_equiv::random::complex_gaussian(&mut rng) + 2.0).collect();
        let moved: Vec<Matrix> = fs
            .iter()
            .enumerate()
            .map(|(k, f)| {
                Matrix::from_fn(f.nrows(), r, |i, c| {
                    let s = match k {
                        0 => scales[perm[c]],
                        1 => scales[perm[c]].inv(),
                        _ => Complex64::new(1.0, 0.0),
                    };
                    f[(i, perm[c])] * s
                })
            })
            .collect();
        let t2 = reconstruct_factors(&moved).unwrap();
        prop_assert!(frobenius_norm(&t2.sub(&t).unwrap()) <= 1e-12 * frobenius_norm(&t));

        let opts = AlsOptions { restarts: 2, seed, ..Default::default() };
        let trace = als_fit_traced(&t, r, &opts).unwrap();
        for h in &trace.histories {
            for w in h.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12);
            }
        }
        let model = reconstruct_factors(&trace.best.factors).unwrap();
        let a = &trace.best.factors;
        for n in 0..3 {
            let rest: Vec<&Matrix> = (0..3).rev().filter(|&k| k != n).map(|k| &a[k]).collect();
            let direct = &a[n] * khatri_rao_all(&rest).unwrap().transpose();
            prop_assert!(rel(&direct, &unfold(&model, n).unwrap()) <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn cp_fit_survives_local_invertibles(seed in any::<u64>(), r in 1usize..=3) {
        let mut rng = stream(seed, 0);
        let dims = [3usize, 3, 3];
        let fs: Vec<Matrix> = dims.iter().map(|&d| ginibre(d, r, &mut rng)).collect();
        let t = reconstruct_factors(&fs).unwrap();
        let ms: Vec<Matrix> = dims.iter().map(|&d| conditioned_invertible(d, 0.5, 2.0, &mut rng)).collect();
        let y = apply_local(&t, &ms).unwrap();
        let fit = als_fit(&y, r, &AlsOptions { restarts: 16, max_iters: 3000, seed, ..Default::default() }).unwrap().fit;
        prop_assert!(fit >= 1.0 - 1e-6, "fit {}", fit);
    }

    #[test]
    fn adjoint_rep_is_a_homomorphism(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = stream(seed, 0);
        let (a, b) = (conditioned_invertible(d, 0.5, 2.0, &mut rng), conditioned_invertible(d, 0.5, 2.0, &mut rng));
        let lab = adjoint_rep(&(&a * &b), d).unwrap().l;
        let la_lb = adjoint_rep(&a, d).unwrap().l * adjoint_rep(&b, d).unwrap().l;
        prop_assert!(fro(&(lab - &la_lb)) <= 1e-10 * fro(&la_lb).max(1.0));
    }

    #[test]
    fn coefficient_covariance(dims in prop::collection::vec(2usize..=3, 1..=3), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let total: usize = dims.iter().product();
        let rho = full_rank_density(total, &mut rng);
        let ms: Vec<Matrix> = dims.iter().map(|&d| conditioned_invertible(d, 0.5, 2.0, &mut rng)).collect();
        let w = kronecker_all(&ms);
        let image = &w * &rho * w.adjoint();
        let image = (&image + image.adjoint()) * Complex64::new(0.5, 0.0);
        let ls: Vec<Matrix> = ms.iter().zip(&dims).map(|(m, &d)| adjoint_rep(m, d).unwrap().l).collect();
        let lhs = coefficients_of(&image, &dims).unwrap();
        let rhs = apply_local(&coefficients_of(&rho, &dims).unwrap(), &ls).unwrap();
        prop_assert!(frobenius_norm(&lhs.sub(&rhs).unwrap()) <= 1e-10 * frobenius_norm(&rhs).max(1.0));
    }

    #[test]
    fn pure_tensor_intertwines_local_action(dims in prop::collection::vec(1usize..=3, 1..=4), seed in any::<u64>()) {
        let mut rng = stream(seed, 0);
        let total: usize = dims.iter().product();
        let psi = haar_state(total, &mut rng);
        let ms: Vec<Matrix> = dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect();
        let image = kronecker_all(&ms) * &psi;
        let lhs = pure_to_tensor(&QuantumState::pure(dims.clone(), image).unwrap()).unwrap();
        let rhs = apply_local(&pure_to_tensor(&QuantumState::pure(dims.clone(), psi).unwrap()).unwrap(), &ms).unwrap();
        prop_assert!(frobenius_norm(&lhs.sub(&rhs).unwrap()) <= 1e-12);
    }

    #[test]
    fn density_roundtrip(dims in prop::collection::vec(2usize..=3, 1..=3), seed in any::<u64>()) {
        let total: usize = dims.iter().product();
        let rho = full_rank_density(total, &mut stream(seed, 0));
        let s = QuantumState::mixed(dims.clone(), rho.clone()).unwrap();
        let back = tensor_to_density(&density_to_tensor(&s).unwrap(), &dims).unwrap();
        prop_assert!(fro(&(back.density() - rho)) <= 1e-12);
    }
}

fn verdict_pair(a: &QuantumState, b: &QuantumState, mode: WitnessMode) -> (Verdict, Verdict) {
    let opts = CheckOptions::default();
    let run = |x, y| match mode {
        WitnessMode::Unitary => pure_lu_check(x, y, &opts).unwrap(),
        WitnessMode::Invertible => pure_slocc_check(x, y, &opts).unwrap(),
    };
    (run(a, b), run(b, a))
}

/// Both directions agree, and the composed witnesses stabilize the state. For
/// generic three-qubit LU pairs the stabilizer is trivial, so the composition
/// is a scalar multiple of the identity on every party.
#[test]
fn checks_are_symmetric() {
    for (dims, mode) in [(vec![2, 2, 2], WitnessMode::Unitary), (vec![2, 3, 2], WitnessMode::Invertible)] {
        for seed in 0..10 {
            let p = generate_equivalent_pair(&dims, StateKind::Pure, mode, seed).unwrap();
            let (ab, ba) = verdict_pair(&p.a, &p.b, mode);
            assert_eq!(ab.label(), ba.label(), "{dims:?} seed {seed}");
            let (Some(f), Some(g)) = (ab.witness(), ba.witness()) else { continue };
            let comp: Vec<Matrix> = f.matrices.iter().zip(&g.matrices).map(|(x, y)| y * x).collect();
            let x = pure_to_tensor(&p.a).unwrap();
            let back = apply_local(&x, &comp).unwrap();
            assert!(frobenius_norm(&back.sub(&x).unwrap()) <= 1e-6, "{dims:?} seed {seed}");
            if mode == WitnessMode::Invertible {
                continue;
            }
            for (x, y) in f.matrices.iter().zip(&g.matrices) {
                let comp = y * x;
                let c = comp.trace() / comp.nrows() as f64;
                let id = Matrix::identity(comp.nrows(), comp.nrows()) * c;
                assert!(fro(&(&comp - &id)) <= 1e-6 * c.norm(), "{dims:?} seed {seed}: {comp}");
            }
        }
    }
    let g = qudit_equiv::fixtures::ghz(3).unwrap();
    let w = qudit_equiv::fixtures::w().unwrap();
    let (ab, ba) = verdict_pair(&g, &w, WitnessMode::Invertible);
    assert_eq!(ab.label(), ba.label());
}

#[test]
fn witnesses_reproduce_the_target_globally() {
    for seed in 0..10 {
        let p = generate_equivalent_pair(&[3, 3, 2], StateKind::Pure, WitnessMode::Invertible, seed).unwrap();
        let v = pure_slocc_check(&p.a, &p.b, &CheckOptions::default()).unwrap();
        let Verdict::Equivalent(e) = v else { panic!("seed {seed}: {v:?}") };
        let (x, y) = (pure_to_tensor(&p.a).unwrap(), pure_to_tensor(&p.b).unwrap());
        let image = apply_local(&x, &e.witness.matrices).unwrap();
        assert!(frobenius_norm(&image.sub(&y).unwrap()) <= 1e-8);
        let ev = e.pivot.expect("pivot evidence on the success path");
        assert!(ev.residual <= 1e-8 && ev.rank_gaps.iter().all(|&g| g <= 1e-8));
    }
}

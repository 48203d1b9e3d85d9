//! Randomized invariants over constructed instances with known answers.

use altsplit::instance::{ep_matrix, group_monotone, index_one};
use altsplit::linalg::{moore_penrose, rank, range_basis, relative_distance, spectral_radius, null_basis};
use altsplit::{
    constant_term, fixed_point, generate_gweak, group_inverse, induced_splitting_report, iterate,
    iteration_matrix, make_splitting, verify_group_axioms, verify_splitting_identities, GenConfig,
    IterationConfig, Matrix, Scheme, Splitting, SplittingClass, Tolerances,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_row_major(rows, cols, (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
}

fn low_rank(rng: &mut ChaCha8Rng, n: usize, r: usize) -> Matrix {
    random_matrix(rng, n, r) * random_matrix(rng, r, n)
}

fn regular_triple(n: usize, seed: u64) -> (Matrix, Matrix, Vec<Splitting>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = group_monotone(n, 1, &mut rng).unwrap();
    let parts = (0..3)
        .map(|_| make_splitting(inst.a(), &inst.regular_partner(&mut rng).unwrap(), &tol()).unwrap())
        .collect();
    (inst.a().clone(), inst.ginv().clone(), parts)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bases_are_orthonormal(seed in any::<u64>(), n in 2usize..10, r in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = r.min(n);
        let a = low_rank(&mut rng, n, r);
        for b in [range_basis(&a, &tol()), null_basis(&a, &tol())] {
            if b.cols() > 0 {
                let gram = b.transpose() * &b;
                prop_assert!((&gram - Matrix::identity(b.cols())).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rank_of_transpose(seed in any::<u64>(), n in 2usize..10, r in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = low_rank(&mut rng, n, r.min(n));
        prop_assert_eq!(rank(&a, &tol()), rank(&a.transpose(), &tol()));
        prop_assert_eq!(rank(&a, &tol()), r.min(n));
    }

    #[test]
    fn penrose_equations(seed in any::<u64>(), rows in 1usize..9, cols in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, rows, cols);
        let x = moore_penrose(&a, &tol());
        let ax = &a * &x;
        let xa = &x * &a;
        prop_assert!(relative_distance(&(&ax * &a), &a) < 1e-9);
        prop_assert!(relative_distance(&(&xa * &x), &x) < 1e-9);
        prop_assert!(relative_distance(&ax, &ax.transpose()) < 1e-9);
        prop_assert!(relative_distance(&xa, &xa.transpose()) < 1e-9);
    }

    #[test]
    fn radius_invariant_under_transpose(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, n, n);
        let (p, q) = (spectral_radius(&m).unwrap(), spectral_radius(&m.transpose()).unwrap());
        prop_assert!((p - q).abs() < 1e-9 * p.max(1.0));
    }

    #[test]
    fn group_inverse_matches_oracle(seed in any::<u64>(), n in 2usize..=12, nullity in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = index_one(n, n.saturating_sub(nullity).max(1), &mut rng).unwrap();
        let g = group_inverse(&inst.a, &tol()).unwrap();
        prop_assert_eq!(g.index, 1);
        prop_assert!(verify_group_axioms(&inst.a, &g.ginv).unwrap().max() < 1e-8);
        prop_assert!(relative_distance(&g.ginv, &inst.ginv) < 1e-8);
    }

    #[test]
    fn ep_group_inverse_is_pseudoinverse(seed in any::<u64>(), n in 2usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = ep_matrix(n, n - 1, &mut rng).unwrap();
        let g = group_inverse(&inst.a, &tol()).unwrap().ginv;
        prop_assert!(relative_distance(&g, &moore_penrose(&inst.a, &tol())) < 1e-8);
    }

    #[test]
    fn splitting_identities(seed in any::<u64>(), n in 2usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = index_one(n, n - 1, &mut rng).unwrap();
        let u = inst.proper_partner(&mut rng).unwrap();
        let s = make_splitting(&inst.a, &u, &tol()).unwrap();
        let r = verify_splitting_identities(&s, &tol()).unwrap();
        prop_assert!(r.max_residual() < 1e-8, "{:?}", r);
        prop_assert!(r.min_sigma() > 1e-8);
    }

    #[test]
    fn weak_regular_splittings_of_monotone_matrices_converge(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = group_monotone(n, 1, &mut rng).unwrap();
        let s = generate_gweak(inst.a(), &GenConfig::with_seed(seed), &tol()).unwrap();
        prop_assert!(s.is(SplittingClass::GWeakRegular));
        prop_assert!(s.spectral_radius().unwrap() < 1.0);
    }

    #[test]
    fn weak_regular_triples_converge(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = group_monotone(n, 1, &mut rng).unwrap();
        let parts = (0..3u64)
            .map(|k| generate_gweak(inst.a(), &GenConfig::with_seed(seed ^ k), &tol()).unwrap())
            .collect();
        let h = iteration_matrix(&Scheme::new(parts).unwrap());
        prop_assert!(spectral_radius(&h).unwrap() < 1.0);
    }

    #[test]
    fn regular_triples_beat_their_parts(seed in any::<u64>(), n in 2usize..=8) {
        let (_, _, parts) = regular_triple(n, seed);
        let scheme = Scheme::new(parts.clone()).unwrap();
        let report = induced_splitting_report(&scheme, &tol()).unwrap();
        prop_assume!(report.range_gap < tol().subspace_tol && report.null_gap < tol().subspace_tol);
        let rho_h = spectral_radius(&iteration_matrix(&scheme)).unwrap();
        let min = parts.iter().map(|s| s.spectral_radius().unwrap()).fold(f64::INFINITY, f64::min);
        prop_assert!(rho_h <= min + 1e-9, "{} > {}", rho_h, min);
    }

    #[test]
    fn staged_equals_composed(seed in any::<u64>(), n in 2usize..=8, steps in 1usize..=3, k in 1usize..=50) {
        let (_, _, parts) = regular_triple(n, seed);
        let scheme = Scheme::new(parts[..steps].to_vec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let b = random_matrix(&mut rng, n, 1);
        let x0 = random_matrix(&mut rng, n, 1);
        let (h, c) = (iteration_matrix(&scheme), constant_term(&scheme, &b).unwrap());
        let mut composed = vec![x0.clone()];
        for j in 0..k {
            composed.push(&h * &composed[j] + &c);
        }
        let cfg = IterationConfig { x0: Some(x0), eps: f64::MIN_POSITIVE, max_iter: k };
        let trace = iterate(&scheme, &b, &cfg).unwrap();
        // stopping early means an exactly stationary iterate
        let stop = trace.iterations;
        prop_assert!(stop == k || trace.step_norms[stop - 1] == 0.0);
        prop_assert!((&trace.x_final - &composed[stop]).max_abs() < 1e-10);
        prop_assert!((&trace.x_final - &composed[k]).max_abs() < 1e-10);
    }

    #[test]
    fn iteration_reaches_fixed_point(seed in any::<u64>(), n in 2usize..=8, steps in 1usize..=3) {
        let (_, ginv, parts) = regular_triple(n, seed);
        let scheme = Scheme::new(parts[..steps].to_vec()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
        let b = random_matrix(&mut rng, n, 1);
        let fp = fixed_point(&scheme, &b).unwrap();
        prop_assert!((&fp - &ginv * &b).norm() < 1e-8 * (1.0 + fp.norm()));
        let cfg = IterationConfig { eps: 1e-10, max_iter: 100_000, ..Default::default() };
        let trace = iterate(&scheme, &b, &cfg).unwrap();
        prop_assert!(trace.converged);
        prop_assert!((&trace.x_final - &fp).norm() < 1e-6);
    }
}

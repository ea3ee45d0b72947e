//! Cross-checks against dense eigendecompositions and Cholesky factorizations.

use leja_logdet::oracle::{dense_logdet_cholesky, gmrf_grid_extreme_eigenvalues, DenseMatrix};
use leja_logdet::random::{seeded_rng, standard_normal, uniform};
use leja_logdet::spectral::{lanczos_lambda_max, shift_invert_lambda_min, KrylovOptions};
use leja_logdet::*;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

fn to_nalgebra(q: &Csr) -> DMatrix<f64> {
    let n = q.dim();
    DMatrix::from_row_slice(n, n, &q.to_dense())
}

/// Sparse SPD matrix: random symmetric couplings plus a diagonal shift that
/// leaves the smallest eigenvalue at `floor`.
fn sparse_spd(n: usize, seed: u64, floor: f64) -> Csr {
    let mut rng = seeded_rng(seed);
    let u: Vec<f64> = uniform(&mut rng, 3 * n);
    let mut trip = Vec::new();
    for k in 0..n {
        let i = k;
        let j = (u[k] * n as f64) as usize % n;
        if i != j {
            let v = u[n + k] - 0.5;
            trip.push((i, j, v));
            trip.push((j, i, v));
        }
    }
    for i in 0..n {
        trip.push((i, i, u[2 * n + i]));
    }
    let base = CsrMatrix::from_triplets(n, trip.clone()).unwrap();
    let lo = SymmetricEigen::new(to_nalgebra(&base)).eigenvalues.min();
    for i in 0..n {
        trip.push((i, i, floor - lo));
    }
    CsrMatrix::from_triplets(n, trip).unwrap()
}

fn dense_log(a: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(a.clone());
    &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::ln)) * eig.eigenvectors.transpose()
}

#[test]
fn gershgorin_encloses_spectrum_and_krylov_estimates() {
    for seed in 0..12 {
        let n = 30 + 13 * seed as usize;
        let q = sparse_spd(n, seed, 0.3 + seed as f64);
        let eig = SymmetricEigen::new(to_nalgebra(&q)).eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        let g = gershgorin_bounds(&q, EpsFloor::default()).unwrap();
        assert!(g.lambda_min <= lo && g.lambda_max >= hi, "seed {seed}");

        let opts = KrylovOptions { tol: 1e-10, max_iter: 300, seed, cg_max_iter: 10_000 };
        let top = lanczos_lambda_max(&q, &opts);
        let bottom = shift_invert_lambda_min(&q, &opts).unwrap();
        assert!(g.contains(top.value) && g.contains(bottom.value), "seed {seed}");
        assert!((top.value - hi).abs() <= 1e-6 * hi, "{} vs {hi}", top.value);
        assert!((bottom.value - lo).abs() <= 1e-6 * hi, "{} vs {lo}", bottom.value);
    }
}

#[test]
fn log_action_matches_eigendecomposition() {
    for seed in 0..6 {
        let q = sparse_spd(60, seed, 0.5);
        let a = to_nalgebra(&q);
        let eig = SymmetricEigen::new(a.clone()).eigenvalues;
        let interval = SpectralInterval::new(eig.min(), eig.max(), BoundsMethod::Supplied).unwrap();
        let interp =
            LogInterpolant::build(&interval, ScalingChoice::OptimalCenter, &TaylorOptions::default(), 400).unwrap();
        let v = standard_normal::<f64>(&mut seeded_rng(seed), 60);
        let want = dense_log(&a) * DVector::from_column_slice(&v);
        let opts = ActionOptions { tol: 1e-10, ..Default::default() };
        let got = log_matvec(&q, &v, &interp, &opts).unwrap();
        assert!(got.converged);
        assert_eq!(got.matvecs, got.degree_used);
        let err = (DVector::from_vec(got.vector) - &want).norm() / want.norm();
        assert!(err <= 1e-8, "seed {seed}: {err:e}");
    }
}

#[test]
fn normalization_algebra_is_exact() {
    for seed in 0..5 {
        let q = sparse_spd(40, seed, 0.05 + 0.1 * seed as f64);
        let a = to_nalgebra(&q);
        let eig = SymmetricEigen::new(a.clone()).eigenvalues;
        let interval = SpectralInterval::new(eig.min(), eig.max(), BoundsMethod::Supplied).unwrap();
        let norm = normalize(&interval);
        assert!(norm.scaled && norm.sigma < 1.0);
        let scaled = dense_log(&(a.clone() / norm.sigma)).trace();
        let direct = dense_log(&a).trace();
        let n = a.nrows() as f64;
        assert!((n * norm.sigma.ln() + scaled - direct).abs() <= 1e-10 * direct.abs().max(1.0));
    }
}

#[test]
fn analytic_gmrf_matches_dense_cholesky() {
    for g in 2..=8 {
        for theta in [-0.22, -0.1, 0.1, 0.2] {
            let q = gen_gmrf_grid::<f64>(g, theta).unwrap();
            let dense = dense_logdet_cholesky(&DenseMatrix::from_csr(&q)).unwrap();
            let analytic = gmrf_grid_logdet_analytic(g, theta).unwrap();
            assert!((dense - analytic).abs() <= 1e-10 * dense.abs(), "g={g} θ={theta}: {dense} vs {analytic}");

            let eig = SymmetricEigen::new(to_nalgebra(&q)).eigenvalues;
            let (lo, hi) = gmrf_grid_extreme_eigenvalues(g, theta).unwrap();
            assert!((eig.min() - lo).abs() < 1e-12 && (eig.max() - hi).abs() < 1e-12);
        }
    }
}

#[test]
fn band_matches_dense_cholesky() {
    for (n, seed) in [(5, 0), (64, 1), (500, 2), (2000, 3)] {
        let q = gen_pentadiagonal::<f64>(n, seed).unwrap();
        let band = band_logdet_cholesky(&q, 2).unwrap();
        let dense = dense_logdet_cholesky(&DenseMatrix::from_csr(&q)).unwrap();
        assert!((band - dense).abs() <= 1e-9 * dense.abs(), "n={n}");
    }
    let q = gen_gmrf_grid::<f64>(12, -0.2).unwrap();
    let band = band_logdet_cholesky(&q, 12).unwrap();
    let dense = dense_logdet_cholesky(&DenseMatrix::from_csr(&q)).unwrap();
    assert!((band - dense).abs() <= 1e-9 * dense.abs());
}

#[test]
fn slq_full_degree_is_exact_for_each_probe() {
    // With m_l = n, Gauss quadrature integrates log exactly against the
    // probe's spectral measure, so each probe returns vᵀ log(Q) v.
    let q = sparse_spd(12, 9, 0.7);
    let log_a = dense_log(&to_nalgebra(&q));
    let r = slq_logdet(&q, 12, 1, 4, ReductionMode::Sequential).unwrap();
    let mut rng = <leja_logdet::random::SeededRng as rand::SeedableRng>::seed_from_u64(4);
    rng.set_stream(0);
    let v = DVector::from_vec(leja_logdet::random::rademacher::<f64>(&mut rng, 12));
    let want = v.dot(&(&log_a * &v));
    assert!((r.estimate - want).abs() <= 1e-9 * want.abs().max(1.0), "{} vs {want}", r.estimate);
}

//! Randomized invariants.

use std::collections::BTreeMap;
use std::io::Cursor;

use leja_logdet::divdiff::reference_scaled_divided_differences;
use leja_logdet::sparse::{read_matrix_market, MmSymmetry};
use leja_logdet::sparse::mtx::write_matrix_market_to;
use leja_logdet::*;
use proptest::prelude::*;

fn symmetric_triplets(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (1..max_n).prop_flat_map(|n| {
        let entry = (0..n, 0..n, -10.0..10.0f64);
        (Just(n), prop::collection::vec(entry, 0..4 * n))
    })
}

fn symmetric_csr(n: usize, entries: &[(usize, usize, f64)]) -> Csr {
    let upper: BTreeMap<(usize, usize), f64> = entries.iter().map(|&(i, j, v)| ((i.min(j), i.max(j)), v)).collect();
    let mut trip = Vec::new();
    for (&(i, j), &v) in &upper {
        trip.push((i, j, v));
        if i != j {
            trip.push((j, i, v));
        }
    }
    CsrMatrix::from_triplets(n, trip).unwrap()
}

fn interval(lo: f64, hi: f64) -> Interval {
    SpectralInterval::new(lo, hi, BoundsMethod::Supplied).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matvec_reproduces_dense_columns((n, entries) in symmetric_triplets(40)) {
        let q = symmetric_csr(n, &entries);
        let dense = q.to_dense();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = q.matvec(&e).unwrap();
            for i in 0..n {
                prop_assert_eq!(col[i], dense[i * n + j]);
            }
        }
        prop_assert_eq!(q.max_asymmetry(), Some(0.0));
    }

    #[test]
    fn matrix_market_round_trip((n, entries) in symmetric_triplets(30), general in any::<bool>()) {
        let q = symmetric_csr(n, &entries);
        let symmetry = if general { MmSymmetry::General } else { MmSymmetry::Symmetric };
        let mut buf = Vec::new();
        write_matrix_market_to(&mut buf, &q, symmetry).unwrap();
        let back: Csr = read_matrix_market(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn generated_matrices_are_symmetric(n in 3usize..300, seed in any::<u64>(), g in 2usize..12, theta in -0.24..0.24f64) {
        prop_assert_eq!(gen_pentadiagonal::<f64>(n, seed).unwrap().max_asymmetry(), Some(0.0));
        prop_assert_eq!(gen_gmrf_grid::<f64>(g, theta).unwrap().max_asymmetry(), Some(0.0));
    }

    #[test]
    fn map_round_trip(lo in 1e-6..1e3f64, width in 1e-6..1e6f64) {
        let hi = lo + width;
        let mp = map_params(&interval(lo, hi));
        prop_assert!((mp.lower() - lo).abs() <= 4.0 * f64::EPSILON * hi);
        prop_assert!((mp.upper() - hi).abs() <= 4.0 * f64::EPSILON * hi);
    }

    #[test]
    fn leja_prefixes_nest_and_map_inside(m in 1usize..200, lo in 1e-3..10.0f64, width in 1e-3..1e4f64) {
        let long: LejaSequence<f64> = generate_fast_leja(200).unwrap();
        let short: LejaSequence<f64> = generate_fast_leja(m).unwrap();
        prop_assert_eq!(short.points(), &long.points()[..m]);
        let hi = lo + width;
        let mp = map_params(&interval(lo, hi));
        let slack = 4.0 * f64::EPSILON * hi;
        for z in short.map_nodes(&mp) {
            prop_assert!(z >= lo - slack && z <= hi + slack, "{} outside [{}, {}]", z, lo, hi);
        }
    }

    #[test]
    fn report_identity_holds(diag in prop::collection::vec(0.05..20.0f64, 2..40), seed in any::<u64>()) {
        let q = CsrMatrix::from_diagonal(&diag);
        for method in [Method::LejaHutchpp, Method::Hutchinson, Method::Slq] {
            let s = Settings { method, queries: 6, probes: 3, slq_degree: 5, seed, ..Default::default() };
            let r = estimate_logdet(&q, &s).unwrap();
            prop_assert_eq!(r.estimate, r.n_log_sigma + r.trace_estimate);
            prop_assert_eq!(r.n, diag.len());
            prop_assert!(r.degrees.min <= r.degrees.max);
        }
    }

    #[test]
    fn sequential_runs_are_bitwise_identical(n in 20usize..200, seed in any::<u64>()) {
        let q = gen_pentadiagonal::<f64>(n, seed).unwrap();
        for method in [Method::LejaHutchpp, Method::Hutchinson, Method::Slq] {
            let s = Settings { method, queries: 6, probes: 4, slq_degree: 8, seed, ..Default::default() };
            let a = estimate_logdet(&q, &s).unwrap();
            let b = estimate_logdet(&q, &s).unwrap();
            prop_assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
            prop_assert_eq!(a.matvecs_total, b.matvecs_total);
        }
    }

    #[test]
    fn action_is_linear_at_fixed_degree(
        n in 5usize..60,
        seed in any::<u64>(),
        alpha in -5.0..5.0f64,
        degree in 1usize..40,
    ) {
        let q = gen_pentadiagonal::<f64>(n, seed).unwrap();
        let bounds = gershgorin_bounds(&q, EpsFloor::default()).unwrap();
        let interp = LogInterpolant::build(&bounds, ScalingChoice::OptimalCenter, &TaylorOptions::default(), 64).unwrap();
        let opts = ActionOptions { force_degree: Some(degree), ..Default::default() };
        let v = leja_logdet::random::standard_normal::<f64>(&mut leja_logdet::random::seeded_rng(seed), n);
        let scaled: Vec<f64> = v.iter().map(|x| alpha * x).collect();
        let a = log_matvec(&q, &v, &interp, &opts).unwrap();
        let b = log_matvec(&q, &scaled, &interp, &opts).unwrap();
        prop_assert_eq!(a.degree_used, degree);
        prop_assert_eq!(a.matvecs, degree);
        let norm = a.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (x, y) in a.vector.iter().zip(&b.vector) {
            prop_assert!((alpha * x - y).abs() <= 1e-12 * (1.0 + alpha.abs()) * norm);
        }
    }

    #[test]
    fn hutchpp_variance_free_on_identity_multiples(c in 1.0..50.0f64, n in 1usize..50, seed in any::<u64>()) {
        let q = CsrMatrix::from_diagonal(&vec![c; n]);
        let r = hutchpp_logdet(&q, 9, seed, &interval(c, c), &Default::default()).unwrap();
        prop_assert!(rel(r.estimate, n as f64 * c.ln()) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stable_divided_differences_match_reference(log_kappa in 0.2..4.0f64, lo in 0.5..5.0f64, m in 2usize..31) {
        let hi = lo * 10f64.powf(log_kappa);
        let mp = map_params(&interval(lo, hi));
        let seq = generate_fast_leja::<f64>(m).unwrap();
        let taylor = TaylorOptions { tol: 1e-16, max_terms: 1_000_000 };
        let dd = divided_differences_log(&seq, &mp, ScalingChoice::OptimalCenter, &taylor).unwrap();
        prop_assert!(!dd.truncated);
        let reference = reference_scaled_divided_differences(&seq.map_nodes(&mp), mp.gamma, 256).unwrap();
        for (k, (&d, &r)) in dd.coeffs.iter().zip(&reference).enumerate() {
            prop_assert!(rel(d, r) <= 1e-9, "k={}: {} vs {}", k, d, r);
        }
    }
}

#[test]
fn divided_differences_decay_on_a_narrow_interval() {
    let mp = map_params(&interval(1.0, 3.0));
    let seq = generate_fast_leja::<f64>(101).unwrap();
    let dd = divided_differences_log(&seq, &mp, ScalingChoice::OptimalCenter, &TaylorOptions::default()).unwrap();
    let mags: Vec<f64> = dd.coeffs.iter().map(|d| d.abs()).collect();
    let tail_max = |m: usize| mags[m..].iter().cloned().fold(0.0, f64::max);
    for m in (10..=90).step_by(10) {
        let (now, later) = (tail_max(m), tail_max(m + 10));
        assert!(later < now || now == 0.0, "m={m}");
    }
    assert!(mags[100] < 1e-20);
}

#[test]
fn taylor_terms_decay_geometrically() {
    for kappa in [3.0, 10.0, 100.0] {
        let mp = map_params(&interval(1.0, kappa));
        let seq = generate_fast_leja::<f64>(20).unwrap();
        let rho = (kappa - 1.0) / (kappa + 1.0);
        let term = |k: usize| {
            let opts = TaylorOptions { tol: 0.0, max_terms: k };
            divided_differences_log(&seq, &mp, ScalingChoice::OptimalCenter, &opts).unwrap().last_term_norm
        };
        let k = (400.0 / (1.0 - rho)) as usize;
        let ratio = (term(k + 20) / term(k)).powf(1.0 / 20.0);
        assert!(ratio <= rho + 1e-3, "κ={kappa}: ratio {ratio} vs ρ {rho}");
    }
}

#[test]
fn f32_pipeline() {
    let q = gen_pentadiagonal::<f32>(300, 4).unwrap();
    let s: EstimateSettings<f32> = EstimateSettings { tol: 1e-4, seed: 2, ..Default::default() };
    let r: Report32 = estimate_logdet(&q, &s).unwrap();
    let exact = band_logdet_cholesky(&gen_pentadiagonal::<f64>(300, 4).unwrap(), 2).unwrap();
    assert!(((r.estimate as f64) - exact).abs() / exact.abs() < 0.02, "{} vs {exact}", r.estimate);
    let exact32 = band_logdet_cholesky(&q, 2).unwrap();
    assert!(((exact32 as f64) - exact).abs() / exact.abs() < 1e-4);
}

#[test]
fn hutchinson_is_unbiased() {
    let q = CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0, 4.0, 5.0]);
    let iv = interval(1.0, 5.0);
    let mean = (0..10)
        .map(|seed| hutchinson_logdet(&q, 3000, seed, &iv, &Default::default()).unwrap().estimate)
        .sum::<f64>()
        / 10.0;
    let exact = 120f64.ln();
    assert!((mean - exact).abs() / exact < 0.01, "{mean} vs {exact}");
}

//! Solver-level oracle tests: the entrywise (X, S) closed form against a
//! golden-section scalar minimizer, the L step against the Jacobi
//! projection oracle, and convergence behavior on noiseless
//! block-diagonal inputs.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use blockrec::admipc::{self, Iterate, SolverConfig};
use blockrec::eval::bdo_matrix;
use blockrec::mat::DenseSymMatrix;
use blockrec::netgen::{generate_network, sample_mask, GeneratorConfig};
use blockrec::spectral::SpectralBackend;
use common::{golden_section_minimize, jacobi_eig, oracle_psd_project, two_block_instance};

fn mid_run_iterate(n: usize, rng: &mut ChaCha12Rng, mu: f64) -> Iterate {
    Iterate {
        l: common::random_symmetric(rng, n, 1.2),
        x: DenseSymMatrix::zeros(n),
        s: DenseSymMatrix::zeros(n),
        y: common::random_symmetric(rng, n, 0.8),
        mu,
        k: 3,
    }
}

#[test]
fn xs_update_matches_per_entry_golden_section_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(71);
    let cfg = GeneratorConfig::new(8, 1.0, 5);
    let (full, _) = generate_network(&cfg).unwrap();
    let graph = full.restrict(&sample_mask(full.n(), 0.8, 3).unwrap()).unwrap();
    let (d, mask) = graph.to_dense();
    let n = d.n();
    let rho = 1.0 / (n as f64).sqrt();
    let it = mid_run_iterate(n, &mut rng, 2.3);
    let (x, s) = admipc::update_xs(&it, &d, &mask, rho);

    for i in 0..n {
        for j in 0..n {
            let q = it.l.get(i, j) - it.y.get(i, j) / it.mu;
            if i == j {
                assert_eq!(s.get(i, j), 0.0);
                assert_eq!(x.get(i, j), 1.0);
            } else if mask.observed(i, j) {
                // scalar problem: rho |s| + mu/2 (s - (d - q))^2 on [-1, d]
                let t_bar = d.get(i, j) - q;
                let f = |t: f64| rho * t.abs() + it.mu / 2.0 * (t - t_bar).powi(2);
                let oracle = golden_section_minimize(f, -1.0, d.get(i, j), 1e-12);
                assert!(
                    (s.get(i, j) - oracle).abs() <= 1e-6,
                    "S[{i},{j}] = {} vs oracle {oracle}",
                    s.get(i, j)
                );
                assert!((x.get(i, j) - (d.get(i, j) - s.get(i, j))).abs() == 0.0);
            } else {
                // unobserved: nonnegative least squares toward q
                let f = |t: f64| (t - q).powi(2);
                let oracle = golden_section_minimize(f, 0.0, q.abs() + 1.0, 1e-12);
                assert!(
                    (x.get(i, j) - oracle).abs() <= 1e-6,
                    "X[{i},{j}] = {} vs oracle {oracle}",
                    x.get(i, j)
                );
                assert_eq!(s.get(i, j), 0.0);
            }
        }
    }
}

#[test]
fn l_update_matches_jacobi_projection_oracle() {
    let mut rng = ChaCha12Rng::seed_from_u64(72);
    for mu in [0.7, 3.0, 40.0] {
        let x = common::random_symmetric(&mut rng, 9, 1.0);
        let y = common::random_symmetric(&mut rng, 9, 0.5);
        let (l, calls) = admipc::update_l(&x, &y, mu, &SpectralBackend::full_dense()).unwrap();
        assert_eq!(calls, 1);
        let q = DenseSymMatrix::from_fn(9, |i, j| x.get(i, j) + y.get(i, j) / mu);
        let oracle = oracle_psd_project(&q, 1.0 / mu);
        assert!((&l - &oracle).frobenius_norm() <= 1e-8);
    }
}

#[test]
fn l_iterates_stay_psd_during_a_solve() {
    let (graph, _) = two_block_instance([9, 7], 6, 99);
    let result = admipc::solve(&graph, &SolverConfig::for_nodes(graph.n())).unwrap();
    let (values, _) = jacobi_eig(&result.l);
    assert!(values.last().copied().unwrap() >= -1e-8);
}

#[test]
fn feasibility_is_exactly_zero_across_penalty_scales() {
    let mut rng = ChaCha12Rng::seed_from_u64(73);
    let cfg = GeneratorConfig::new(14, 0.9, 8);
    let (full, _) = generate_network(&cfg).unwrap();
    let graph = full.restrict(&sample_mask(full.n(), 0.7, 4).unwrap()).unwrap();
    let (d, mask) = graph.to_dense();
    let rho = 1.0 / (d.n() as f64).sqrt();
    for _ in 0..20 {
        let mu = 10f64.powf(rng.gen_range(-2.0..6.0));
        let it = mid_run_iterate(d.n(), &mut rng, mu);
        let (x, s) = admipc::update_xs(&it, &d, &mask, rho);
        assert_eq!(admipc::check_feasibility(&x, &s, &d, &mask), 0.0);
    }
}

#[test]
fn noiseless_bdo_converges_with_small_gap_and_recovers_the_blocks() {
    // alternating direction gap and distance to the planted matrix both
    // shrink below stated bounds on clean inputs
    let (graph, truth) = two_block_instance([26, 24], 0, 0);
    let result = admipc::solve(&graph, &SolverConfig::for_nodes(graph.n())).unwrap();
    assert_eq!(result.status, admipc::SolveStatus::Converged);
    let final_gap = *result.primal_residuals.last().unwrap();
    assert!(final_gap < 1e-4, "gap {final_gap}");
    let target = bdo_matrix(&truth);
    let rel = (&result.l - &target).frobenius_norm() / target.frobenius_norm();
    assert!(rel <= 1e-2, "relative distance {rel}");
}

#[test]
fn residual_histories_expose_the_full_trajectory() {
    let (graph, _) = two_block_instance([12, 10], 8, 7);
    let result = admipc::solve(&graph, &SolverConfig::for_nodes(graph.n())).unwrap();
    assert_eq!(result.primal_residuals.len(), result.iterations);
    assert_eq!(result.dual_residuals.len(), result.iterations);
    assert!(result.iterations >= 2);
    // primal residuals trend down over the run
    let first = result.primal_residuals[0];
    let last = *result.primal_residuals.last().unwrap();
    assert!(last < first);
}

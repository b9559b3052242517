//! Oracle-backed checks of the matrix kernels: the PSD projection and
//! spectral norm against an independent Jacobi eigensolver, and the two
//! spectral backends against each other.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use blockrec::spectral::{psd_project_shifted, spectral_norm, SpectralBackend};
use common::{jacobi_eig, oracle_psd_project, random_symmetric};

#[test]
fn psd_projection_matches_jacobi_oracle_on_random_input() {
    let mut rng = ChaCha12Rng::seed_from_u64(61);
    let q = random_symmetric(&mut rng, 6, 1.5);
    let (l, _) = psd_project_shifted(&q, 0.3, &SpectralBackend::full_dense()).unwrap();
    let oracle = oracle_psd_project(&q, 0.3);
    assert!((&l - &oracle).frobenius_norm() <= 1e-8);
}

#[test]
fn psd_projection_output_is_psd_up_to_tolerance() {
    let mut rng = ChaCha12Rng::seed_from_u64(62);
    for trial in 0..10 {
        let q = random_symmetric(&mut rng, 7, 2.0);
        let shift = 0.1 + 0.2 * trial as f64;
        let (l, _) = psd_project_shifted(&q, shift, &SpectralBackend::full_dense()).unwrap();
        let (values, _) = jacobi_eig(&l);
        assert!(
            values.last().copied().unwrap_or(0.0) >= -1e-8,
            "smallest eigenvalue {:?}",
            values.last()
        );
    }
}

#[test]
fn thresholded_backend_matches_full_dense_on_random_20x20() {
    let mut rng = ChaCha12Rng::seed_from_u64(63);
    let full = SpectralBackend::full_dense();
    let lanczos = SpectralBackend::thresholded_iterative(1e-8);
    for _ in 0..5 {
        let q = random_symmetric(&mut rng, 20, 1.0);
        for shift in [0.1, 0.8, 3.0] {
            let (a, _) = psd_project_shifted(&q, shift, &full).unwrap();
            let (b, _) = psd_project_shifted(&q, shift, &lanczos).unwrap();
            assert!(
                (&a - &b).frobenius_norm() <= 1e-6,
                "shift {shift}: diff {}",
                (&a - &b).frobenius_norm()
            );
        }
    }
}

#[test]
fn spectral_norm_matches_oracle_on_random_8x8() {
    let mut rng = ChaCha12Rng::seed_from_u64(64);
    for _ in 0..20 {
        let m = random_symmetric(&mut rng, 8, 3.0);
        let (values, _) = jacobi_eig(&m);
        let expected = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let got = spectral_norm(&m);
        assert!(
            (got - expected).abs() <= 1e-6 * expected.max(1e-12),
            "got {got}, oracle {expected}"
        );
    }
}

#[test]
fn spectral_norm_never_exceeds_frobenius() {
    let mut rng = ChaCha12Rng::seed_from_u64(65);
    for n in [2usize, 5, 9, 16] {
        let m = random_symmetric(&mut rng, n, 1.0);
        assert!(spectral_norm(&m) <= m.frobenius_norm() + 1e-9);
    }
}

use std::f64::consts::PI;

use gvm_core::{
    build_sigma, gvm_acvf, sample_acvf, simulate, temporal_entropy, Acvf, GvMParams, SimConfig,
    SimMethod,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn white_noise_entropy(k: usize) -> f64 {
    (k + 1) as f64 * (1.0 + (2.0 * PI).ln() + 0.5f64.ln())
}

#[test]
fn white_noise_entropies() {
    for k in 1..=4 {
        let acvf = Acvf::new(1.0, vec![Complex64::new(0.0, 0.0); k]).unwrap();
        let t = temporal_entropy(&build_sigma(&acvf).unwrap()).unwrap();
        assert!((t - white_noise_entropy(k)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sigma_is_symmetric_psd_and_bounded_by_white_noise(
        mu1 in -3.0f64..3.0,
        mu2 in -1.5f64..1.5,
        k1 in 0.0f64..3.0,
        k2 in 0.0f64..3.0,
        lags in 1usize..5,
    ) {
        let p = GvMParams::new(1.0, vec![mu1, mu2], vec![k1, k2]).unwrap();
        let model = build_sigma(&gvm_acvf(&p, lags).unwrap()).unwrap();
        let s = model.sigma_matrix();
        prop_assert_eq!(s, &s.transpose());
        prop_assert!(model.min_eigenvalue() >= -1e-10);
        // Hadamard: det Sigma <= product of the diagonal (1/2)^{2(k+1)}
        let t = temporal_entropy(&model).unwrap();
        prop_assert!(t <= white_noise_entropy(lags) + 1e-12);
    }
}

#[test]
fn white_noise_simulation_band() {
    let p = GvMParams::uniform(1.0, 1).unwrap();
    let n = 20_000;
    for method in [SimMethod::ExactCholesky, SimMethod::Spectral] {
        let x = simulate(&p, &SimConfig::new(n, 5).with_method(method)).unwrap();
        let a = sample_acvf(&x, 5).unwrap();
        let band = 3.0 / (n as f64).sqrt();
        for r in 1..=5 {
            // real and imaginary parts each have standard error 1 / sqrt(2n)
            assert!(a.lag(r).norm() < band, "{method:?} lag {r}: {}", a.lag(r));
        }
        assert!((a.sigma2() - 1.0).abs() < band);
    }
}

#[test]
fn methods_agree_on_the_model() {
    let p = GvMParams::new(2.0, vec![1.0, 0.4], vec![1.5, 0.7]).unwrap();
    let target = gvm_acvf(&p, 3).unwrap();
    for method in [SimMethod::ExactCholesky, SimMethod::Spectral] {
        let x = simulate(&p, &SimConfig::new(20_000, 31).with_method(method)).unwrap();
        let a = sample_acvf(&x, 3).unwrap();
        for r in 0..=3 {
            // loose band; the acceptance suite does the calibrated check
            assert!((a.lag(r) - target.lag(r)).norm() < 0.15, "{method:?} lag {r}");
        }
    }
}

#[test]
fn long_exact_paths_are_reproducible() {
    let p = GvMParams::von_mises(1.0, -0.2, 8.0).unwrap();
    let cfg = SimConfig::new(3000, 2);
    let a = simulate(&p, &cfg).unwrap();
    assert_eq!(a, simulate(&p, &cfg).unwrap());
}

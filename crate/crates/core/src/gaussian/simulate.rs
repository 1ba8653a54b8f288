use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;

use crate::error::{GvmError, Result};
use crate::estimation::ComplexSeries;
use crate::spectrum::{gvm_acvf, Acvf, GvMCdf, GvMParams};

/// Largest jitter tried, relative to `sigma2`.
const MAX_JITTER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMethod {
    /// Exact Gaussian law of `X_1..X_n`, generated sequentially through the
    /// innovations of the Durbin-Levinson recursion (the Cholesky factor of
    /// the Toeplitz covariance, never stored).
    ExactCholesky,
    /// Discretised spectral representation over `M` cells of `(-pi, pi]`.
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub length: usize,
    pub seed: u64,
    pub method: SimMethod,
    /// Cell count `M` of the spectral method; `None` picks
    /// `max(4096, 2 * length.next_power_of_two())`.
    pub spectral_nodes: Option<usize>,
    /// Initial diagonal jitter relative to `sigma2`, escalated tenfold on
    /// factorisation failure.
    pub jitter: f64,
}

impl SimConfig {
    pub fn new(length: usize, seed: u64) -> Self {
        SimConfig {
            length,
            seed,
            method: SimMethod::ExactCholesky,
            spectral_nodes: None,
            jitter: 1e-12,
        }
    }

    pub fn with_method(mut self, method: SimMethod) -> Self {
        self.method = method;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(GvmError::Range(format!(
                "simulated length must be at least 2, got {}",
                self.length
            )));
        }
        if let Some(m) = self.spectral_nodes {
            if m < 64 || m % 2 != 0 {
                return Err(GvmError::InvalidParameter(format!(
                    "spectral nodes must be even and at least 64, got {m}"
                )));
            }
        }
        if !(self.jitter >= 0.0) || !self.jitter.is_finite() {
            return Err(GvmError::InvalidParameter(format!(
                "jitter {} must be finite and nonnegative",
                self.jitter
            )));
        }
        Ok(())
    }

    fn nodes(&self) -> usize {
        self.spectral_nodes
            .unwrap_or_else(|| 4096.max(2 * self.length.next_power_of_two()))
    }
}

/// Complex standard normal with `E|e|^2 = 1` and zero pseudo-variance.
fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Simulates `X_1..X_n` of the zero-mean radially symmetric Gaussian series
/// with spectrum `p`. Deterministic given `(p, cfg)`.
pub fn simulate(p: &GvMParams, cfg: &SimConfig) -> Result<ComplexSeries> {
    cfg.validate()?;
    let values = match cfg.method {
        SimMethod::ExactCholesky => {
            let acvf = gvm_acvf(p, cfg.length - 1)?;
            exact(&acvf, cfg)?
        }
        SimMethod::Spectral => spectral(p, cfg)?.0,
    };
    ComplexSeries::new(values)
}

/// Durbin-Levinson state: `phi[j - 1] = phi_{m,j}`, the coefficients of the
/// best linear predictor of `X_{m+1}` from `X_m..X_1`, and its error
/// variance `v_m`.
struct Levinson {
    phi: Vec<Complex64>,
    v: f64,
}

impl Levinson {
    fn new(psi0: f64) -> Self {
        Levinson {
            phi: Vec::new(),
            v: psi0,
        }
    }

    /// Order `m -> m + 1`; `false` once the error variance is no longer
    /// positive.
    fn advance<F: Fn(usize) -> Complex64>(&mut self, psi: F) -> bool {
        let m = self.phi.len() + 1;
        let mut num = psi(m);
        for (j, c) in self.phi.iter().enumerate() {
            num -= c * psi(m - j - 1);
        }
        let reflection = num / self.v;
        let previous = self.phi.clone();
        for (j, c) in self.phi.iter_mut().enumerate() {
            *c -= reflection * previous[m - 2 - j].conj();
            // decayed coefficients would otherwise go subnormal and stall the recursion
            c.re = flush(c.re);
            c.im = flush(c.im);
        }
        self.phi.push(reflection);
        self.v *= 1.0 - reflection.norm_sqr();
        self.v > 0.0 && self.v.is_finite()
    }
}

/// Coefficients below this contribute nothing at double precision.
const COEFF_FLOOR: f64 = 1e-200;

fn flush(x: f64) -> f64 {
    if x.abs() < COEFF_FLOOR {
        0.0
    } else {
        x
    }
}

/// One path with `psi(0)` inflated by `jitter`; `None` if a prediction
/// variance stops being positive.
fn levinson_path(acvf: &Acvf, n: usize, jitter: f64, seed: u64) -> Option<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi = |r: usize| acvf.lag(r as isize);
    let mut state = Levinson::new(acvf.sigma2() + jitter);
    if !(state.v > 0.0) {
        return None;
    }
    let mut x = Vec::with_capacity(n);
    x.push(state.v.sqrt() * complex_normal(&mut rng));
    for _ in 1..n {
        if !state.advance(psi) {
            return None;
        }
        let prediction: Complex64 =
            state.phi.iter().zip(x.iter().rev()).map(|(c, xv)| c * xv).sum();
        x.push(prediction + state.v.sqrt() * complex_normal(&mut rng));
    }
    Some(x)
}

fn exact(acvf: &Acvf, cfg: &SimConfig) -> Result<Vec<Complex64>> {
    let sigma2 = acvf.sigma2();
    let mut jitter = cfg.jitter;
    loop {
        if let Some(x) = levinson_path(acvf, cfg.length, jitter * sigma2, cfg.seed) {
            return Ok(x);
        }
        jitter = if jitter == 0.0 { 1e-12 } else { jitter * 10.0 };
        if jitter > MAX_JITTER * (1.0 + 1e-9) {
            return Err(GvmError::NotPositiveDefinite(format!(
                "covariance of {} observations is numerically indefinite",
                cfg.length
            )));
        }
    }
}

/// Path and the cell increments it was built from.
fn spectral(p: &GvMParams, cfg: &SimConfig) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let m = cfg.nodes();
    let cdf = GvMCdf::new(p)?;
    let step = 2.0 * PI / m as f64;
    let bounds = (0..=m)
        .map(|i| cdf.eval(if i == m { PI } else { -PI + i as f64 * step }))
        .collect::<Result<Vec<f64>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // dZ_m = sqrt(dF_m / 2) (zeta + i eta)
    let mut y: Vec<Complex64> = bounds
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0).sqrt() * complex_normal(&mut rng))
        .collect();
    let dz = y.clone();
    // sum_m dZ_m e^{i 2 pi m j / M} is the unnormalised inverse DFT
    FftPlanner::new().plan_fft_inverse(m).process(&mut y);
    let shift = -PI + 0.5 * step;
    let x = (1..=cfg.length)
        .map(|j| Complex64::from_polar(1.0, shift * j as f64) * y[j % m])
        .collect();
    Ok((x, dz))
}

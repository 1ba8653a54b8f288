use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Acvf, GvMParams, TabulatedDensity};
use crate::error::{GvmError, Result};
use crate::special::{trig_ratios, trig_ratios_until_negligible, QuadratureSpec, TrigRatios};

/// Harmonics beyond this order are never needed: even at the largest
/// concentrations the Bessel decay has reached zero long before.
const HARMONIC_CAP: usize = 1 << 16;

/// A GvM_k density with its normalising constant computed once.
#[derive(Debug, Clone)]
pub struct GvMDensity {
    params: GvMParams,
    /// `log(2 pi G_0)`
    log_norm: f64,
}

impl GvMDensity {
    pub fn new(params: &GvMParams) -> Result<Self> {
        let ratios = trig_ratios(&params.shape(), None, 0, &QuadratureSpec::default())?;
        Ok(GvMDensity {
            params: params.clone(),
            log_norm: (2.0 * PI).ln() + ratios.log_g0,
        })
    }

    pub fn params(&self) -> &GvMParams {
        &self.params
    }

    /// `log G_0(delta, kappa)`.
    pub fn log_g0(&self) -> f64 {
        self.log_norm - (2.0 * PI).ln()
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.params.sigma2() * (self.params.exponent(theta) - self.log_norm).exp()
    }

    /// Samples the density on an `n`-node grid.
    pub fn tabulate(&self, n: usize) -> Result<TabulatedDensity> {
        TabulatedDensity::from_fn(n, |t| self.eval(t))
    }
}

/// `sigma2 * exp{sum_j kappa_j cos j(theta - mu_j)} / (2 pi G_0)`.
pub fn gvm_density(params: &GvMParams, theta: f64) -> Result<f64> {
    Ok(GvMDensity::new(params)?.eval(theta))
}

/// Spectral distribution function `F(theta) = int_{-pi}^{theta} f`, evaluated
/// by the term-by-term integrated Fourier series of the density.
#[derive(Debug, Clone)]
pub struct GvMCdf {
    sigma2: f64,
    mu1: f64,
    ratios: TrigRatios,
}

impl GvMCdf {
    pub fn new(params: &GvMParams) -> Result<Self> {
        let ratios = trig_ratios_until_negligible(
            &params.shape(),
            None,
            1,
            HARMONIC_CAP,
            &QuadratureSpec::default(),
        )?;
        Ok(GvMCdf {
            sigma2: params.sigma2(),
            mu1: params.mus()[0],
            ratios,
        })
    }

    /// Number of harmonics kept after truncation.
    pub fn terms(&self) -> usize {
        self.ratios.max_r()
    }

    pub fn eval(&self, theta: f64) -> Result<f64> {
        if !(-PI - 1e-12..=PI + 1e-12).contains(&theta) {
            return Err(GvmError::Range(format!("angle {theta} outside [-pi, pi]")));
        }
        let theta = theta.clamp(-PI, PI);
        if theta == -PI {
            return Ok(0.0);
        }
        if theta == PI {
            return Ok(self.sigma2);
        }
        let x = theta - self.mu1;
        let x0 = -PI - self.mu1;
        let mut acc = theta + PI;
        for r in 1..=self.ratios.max_r() {
            let (a, b) = (self.ratios.a[r], self.ratios.b[r]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let rf = r as f64;
            let (s1, c1) = (rf * x).sin_cos();
            let (s0, c0) = (rf * x0).sin_cos();
            acc += 2.0 / rf * (a * (s1 - s0) - b * (c1 - c0));
        }
        Ok((self.sigma2 * acc / (2.0 * PI)).clamp(0.0, self.sigma2))
    }
}

/// `F(theta)` of the GvM_k spectrum, `theta` in `[-pi, pi]`.
pub fn gvm_cdf(params: &GvMParams, theta: f64) -> Result<f64> {
    GvMCdf::new(params)?.eval(theta)
}

/// `F(theta2) - F(theta1)`, the variance of the spectral-process increment
/// over `(theta1, theta2]`.
pub fn spectral_increment_variance(params: &GvMParams, theta1: f64, theta2: f64) -> Result<f64> {
    if !(theta1 < theta2) {
        return Err(GvmError::Range(format!(
            "increment needs theta1 < theta2, got ({theta1}, {theta2})"
        )));
    }
    let cdf = GvMCdf::new(params)?;
    Ok((cdf.eval(theta2)? - cdf.eval(theta1)?).max(0.0))
}

/// Autocovariances `psi(r) = sigma2 e^{i r mu_1} (A_r + i B_r)`, `r = 1..=max_lag`.
pub fn gvm_acvf(params: &GvMParams, max_lag: usize) -> Result<Acvf> {
    let shape = params.shape();
    let quad = QuadratureSpec::default();
    let ratios = if max_lag <= 64 {
        trig_ratios(&shape, None, max_lag, &quad)?
    } else {
        trig_ratios_until_negligible(&shape, None, 64, max_lag, &quad)?
    };
    let mu1 = params.mus()[0];
    let sigma2 = params.sigma2();
    let values = (1..=max_lag)
        .map(|r| {
            if r > ratios.max_r() {
                return Complex64::new(0.0, 0.0);
            }
            let rot = Complex64::from_polar(1.0, r as f64 * mu1);
            sigma2 * rot * Complex64::new(ratios.a[r], ratios.b[r])
        })
        .collect();
    Acvf::new(sigma2, values)
}

//! The GvM_k spectral model and the information functionals around it.

mod density;
mod information;
mod tabulated;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GvmError, Result};
use crate::special::GvMShape;

pub use density::{gvm_acvf, gvm_cdf, gvm_density, spectral_increment_variance, GvMCdf, GvMDensity};
pub use information::{
    exponential_tilt, gvm_entropy, kl_bound, kl_information, spectral_entropy,
};
pub use tabulated::{TabulatedDensity, DEFAULT_GRID};

/// Reduces `x` modulo `period` into `(-period/2, period/2]`.
pub fn wrap_angle(x: f64, period: f64) -> f64 {
    let mut y = x.rem_euclid(period);
    if y > 0.5 * period {
        y -= period;
    }
    if y <= -0.5 * period {
        y += period;
    }
    y
}

/// Reduces `x` modulo `period` into `[0, period)`.
pub(crate) fn reduce_nonnegative(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    if y >= period {
        0.0
    } else {
        y
    }
}

/// Parameters of a GvM_k spectral density: total mass `sigma2`, locations
/// `mu_j` in `(-pi/j, pi/j]` and concentrations `kappa_j >= 0`.
///
/// A location paired with a zero concentration is unidentifiable and is
/// stored as `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GvMParams {
    sigma2: f64,
    mus: Vec<f64>,
    kappas: Vec<f64>,
}

impl GvMParams {
    pub fn new(sigma2: f64, mus: Vec<f64>, kappas: Vec<f64>) -> Result<Self> {
        if !sigma2.is_finite() || sigma2 <= 0.0 {
            return Err(GvmError::InvalidParameter(format!(
                "sigma2 = {sigma2} must be finite and positive"
            )));
        }
        Self::checked(sigma2, mus, kappas)
    }

    fn checked(sigma2: f64, mut mus: Vec<f64>, kappas: Vec<f64>) -> Result<Self> {
        let k = kappas.len();
        if k == 0 {
            return Err(GvmError::InvalidParameter("order k must be at least 1".into()));
        }
        if mus.len() != k {
            return Err(GvmError::InvalidParameter(format!(
                "order {k} needs {k} locations, got {}",
                mus.len()
            )));
        }
        for (i, (&mu, &kappa)) in mus.iter().zip(&kappas).enumerate() {
            let j = (i + 1) as f64;
            if !kappa.is_finite() || kappa < 0.0 {
                return Err(GvmError::InvalidParameter(format!(
                    "kappa_{} = {kappa} must be finite and nonnegative",
                    i + 1
                )));
            }
            if !mu.is_finite() || mu <= -PI / j || mu > PI / j {
                return Err(GvmError::InvalidParameter(format!(
                    "mu_{} = {mu} outside (-pi/{}, pi/{}]",
                    i + 1,
                    i + 1,
                    i + 1
                )));
            }
        }
        for (mu, &kappa) in mus.iter_mut().zip(&kappas) {
            if kappa == 0.0 {
                *mu = 0.0;
            }
        }
        Ok(GvMParams { sigma2, mus, kappas })
    }

    /// The von Mises (order 1) spectrum.
    pub fn von_mises(sigma2: f64, mu: f64, kappa: f64) -> Result<Self> {
        Self::new(sigma2, vec![mu], vec![kappa])
    }

    /// The flat (white noise) spectrum written as an order-`k` model.
    pub fn uniform(sigma2: f64, k: usize) -> Result<Self> {
        Self::new(sigma2, vec![0.0; k], vec![0.0; k])
    }

    /// Zero spectrum of a degenerate, constant series.
    pub(crate) fn null(k: usize) -> Self {
        GvMParams {
            sigma2: 0.0,
            mus: vec![0.0; k],
            kappas: vec![0.0; k],
        }
    }

    /// Builds parameters from `mu_1` and the shape `(delta, kappa)`, choosing
    /// each `mu_{j+1}` in its principal interval.
    pub fn from_shape(sigma2: f64, mu1: f64, shape: &GvMShape) -> Result<Self> {
        let mut mus = Vec::with_capacity(shape.order());
        mus.push(wrap_angle(mu1, 2.0 * PI));
        for (i, &delta) in shape.deltas().iter().enumerate() {
            let period = 2.0 * PI / (i + 2) as f64;
            mus.push(wrap_angle(mus[0] - delta, period));
        }
        Self::new(sigma2, mus, shape.kappas().to_vec())
    }

    pub fn order(&self) -> usize {
        self.kappas.len()
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    /// Same shape and locations with a different total mass.
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(sigma2, self.mus.clone(), self.kappas.clone())
    }

    /// `delta_j = (mu_1 - mu_{j+1}) mod 2pi/(j+1)` for `j = 1..k-1`.
    pub fn deltas(&self) -> Vec<f64> {
        (1..self.order())
            .map(|j| {
                let period = 2.0 * PI / (j + 1) as f64;
                reduce_nonnegative(self.mus[0] - self.mus[j], period)
            })
            .collect()
    }

    pub fn shape(&self) -> GvMShape {
        GvMShape::new(self.deltas(), self.kappas.clone())
            .expect("validated parameters always give a valid shape")
    }

    /// `sum_j kappa_j cos j(theta - mu_j)`.
    pub fn exponent(&self, theta: f64) -> f64 {
        self.kappas
            .iter()
            .zip(&self.mus)
            .enumerate()
            .filter(|(_, (&kappa, _))| kappa != 0.0)
            .map(|(i, (&kappa, &mu))| kappa * ((i + 1) as f64 * (theta - mu)).cos())
            .sum()
    }
}

/// A finite autocovariance sequence `psi(0) = sigma2, psi(1), ..., psi(L)`,
/// extended to negative lags by `psi(-r) = conj psi(r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Acvf {
    sigma2: f64,
    values: Vec<Complex64>,
}

impl Acvf {
    /// `values[r - 1]` is `psi(r)`. Checks `|psi(r)| <= sigma2`; the Toeplitz
    /// condition is checked separately by [`Acvf::check_nonnegative_definite`].
    pub fn new(sigma2: f64, values: Vec<Complex64>) -> Result<Self> {
        if !sigma2.is_finite() || sigma2 < 0.0 {
            return Err(GvmError::InvalidParameter(format!(
                "psi(0) = {sigma2} must be finite and nonnegative"
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(GvmError::InvalidParameter(format!("psi({}) is not finite", i + 1)));
            }
            if v.norm() > sigma2 * (1.0 + 1e-12) + f64::MIN_POSITIVE {
                return Err(GvmError::InvalidParameter(format!(
                    "|psi({})| = {} exceeds psi(0) = {sigma2}",
                    i + 1,
                    v.norm()
                )));
            }
        }
        Ok(Acvf { sigma2, values })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn max_lag(&self) -> usize {
        self.values.len()
    }

    /// `psi(1)..psi(L)`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `psi(r)` for any `|r| <= L`.
    pub fn lag(&self, r: isize) -> Complex64 {
        match r {
            0 => Complex64::new(self.sigma2, 0.0),
            r if r > 0 => self.values[r as usize - 1],
            r => self.values[(-r) as usize - 1].conj(),
        }
    }

    /// Leading `max_lag` lags.
    pub fn truncated(&self, max_lag: usize) -> Result<Acvf> {
        if max_lag > self.max_lag() {
            return Err(GvmError::Range(format!(
                "requested {max_lag} lags from an autocovariance with {}",
                self.max_lag()
            )));
        }
        Ok(Acvf {
            sigma2: self.sigma2,
            values: self.values[..max_lag].to_vec(),
        })
    }

    /// `(L+1) x (L+1)` Hermitian Toeplitz matrix `T[a][b] = psi(a - b)`, as
    /// its real `2(L+1)` embedding `[[Re T, -Im T], [Im T, Re T]]`, whose
    /// spectrum is that of `T` with every eigenvalue doubled.
    fn toeplitz_embedding(&self) -> DMatrix<f64> {
        let n = self.max_lag() + 1;
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let (a, ra) = (i % n, i / n);
            let (b, rb) = (j % n, j / n);
            let z = self.lag(a as isize - b as isize);
            match (ra, rb) {
                (0, 0) | (1, 1) => z.re,
                (0, 1) => -z.im,
                _ => z.im,
            }
        })
    }

    /// Smallest eigenvalue of the Hermitian Toeplitz matrix of `psi(0..L)`.
    pub fn toeplitz_min_eigenvalue(&self) -> f64 {
        let eig = self.toeplitz_embedding().symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Fails unless the Toeplitz matrix is nonnegative definite to within
    /// `1e-10 * sigma2`.
    pub fn check_nonnegative_definite(&self) -> Result<()> {
        let min = self.toeplitz_min_eigenvalue();
        if min < -1e-10 * self.sigma2 {
            return Err(GvmError::NotPositiveDefinite(format!(
                "autocovariance Toeplitz matrix has eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

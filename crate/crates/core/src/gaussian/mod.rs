//! Radially symmetric Gaussian series with a given autocovariance: the real
//! covariance of consecutive observations, its entropy, and simulation.

mod simulate;

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{GvmError, Result};
use crate::spectrum::Acvf;

pub use simulate::{simulate, SimConfig, SimMethod};

/// Real covariance `Sigma(k)` of `(U_0, ..., U_k, V_0, ..., V_k)` where
/// `X_t = U_t + i V_t` are `k + 1` consecutive observations of a radially
/// symmetric Gaussian series.
///
/// With `psi(r) = nu_r + i xi_r` the blocks are
/// `Cov(U_a, U_b) = Cov(V_a, V_b) = nu_{a-b} / 2` and
/// `Cov(V_a, U_b) = -Cov(U_a, V_b) = xi_{a-b} / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    acvf: Acvf,
    sigma: DMatrix<f64>,
}

impl GaussianModel {
    pub fn acvf(&self) -> &Acvf {
        &self.acvf
    }

    pub fn sigma_matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Number of lags `k`; the matrix is `2(k+1)` square.
    pub fn order(&self) -> usize {
        self.acvf.max_lag()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.sigma
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds `Sigma(k)` from `psi(0..k)`; fails if it is not positive
/// semidefinite to within `1e-10 sigma2`.
pub fn build_sigma(acvf: &Acvf) -> Result<GaussianModel> {
    let n = acvf.max_lag() + 1;
    let sigma = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (a, va) = (i % n, i >= n);
        let (b, vb) = (j % n, j >= n);
        let psi = acvf.lag(a as isize - b as isize);
        match (va, vb) {
            (false, false) | (true, true) => psi.re / 2.0,
            (true, false) => psi.im / 2.0,
            (false, true) => -psi.im / 2.0,
        }
    });
    let model = GaussianModel {
        acvf: acvf.clone(),
        sigma,
    };
    let min = model.min_eigenvalue();
    if min < -1e-10 * acvf.sigma2() {
        return Err(GvmError::NotPositiveDefinite(format!(
            "covariance of consecutive observations has eigenvalue {min:e}"
        )));
    }
    Ok(model)
}

/// Differential entropy of the `2(k+1)` real coordinates,
/// `(k+1)(1 + log 2 pi) + log det Sigma(k) / 2`.
pub fn temporal_entropy(model: &GaussianModel) -> Result<f64> {
    let dim = model.sigma.nrows();
    let eig = model.sigma.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) || eig.iter().any(|&l| l <= 1e-13 * max) {
        return Err(GvmError::Degenerate("degenerate distribution, entropy undefined".into()));
    }
    let log_det: f64 = eig.iter().map(|l| l.ln()).sum();
    Ok(0.5 * dim as f64 * (1.0 + (2.0 * PI).ln()) + 0.5 * log_det)
}

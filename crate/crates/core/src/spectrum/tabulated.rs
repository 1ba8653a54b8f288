use std::f64::consts::PI;

use crate::error::{GvmError, Result};

/// Default number of grid nodes for tabulated spectra.
pub const DEFAULT_GRID: usize = 4096;

/// A spectral density sampled on the equispaced grid
/// `theta_m = -pi + 2 pi (m + 1) / n`, `m = 0..n`, covering `(-pi, pi]`.
///
/// The mass is the periodic trapezoid integral of the samples. Between nodes
/// the density is interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    values: Vec<f64>,
    mass: f64,
}

impl TabulatedDensity {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_multiple_of(2) {
            return Err(GvmError::InvalidParameter(format!(
                "tabulated density needs an even number (>= 4) of nodes, got {n}"
            )));
        }
        if let Some(m) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(GvmError::InvalidParameter(format!(
                "tabulated density value {} at node {m} is negative or not finite",
                values[m]
            )));
        }
        let mass = 2.0 * PI * values.iter().sum::<f64>() / n as f64;
        if !(mass > 0.0) {
            return Err(GvmError::InvalidParameter("tabulated density has zero mass".into()));
        }
        Ok(TabulatedDensity { values, mass })
    }

    /// Samples `f` on the `n`-node grid.
    pub fn from_fn<F: Fn(f64) -> f64>(n: usize, f: F) -> Result<Self> {
        Self::new((0..n).map(|m| f(grid_node(m, n))).collect())
    }

    /// Flat density of the given mass.
    pub fn uniform(n: usize, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(GvmError::InvalidParameter(format!("mass {mass} must be positive")));
        }
        Self::new(vec![mass / (2.0 * PI); n])
    }

    /// Same shape rescaled to total mass `mass`.
    pub fn scaled_to(&self, mass: f64) -> Result<Self> {
        let factor = mass / self.mass;
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Angle of node `m` (0-based).
    pub fn node(&self, m: usize) -> f64 {
        grid_node(m, self.len())
    }

    /// Linearly interpolated value at any angle (taken modulo `2 pi`).
    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.len();
        let step = 2.0 * PI / n as f64;
        // position relative to node 0 at -pi + step
        let x = (theta + PI - step).rem_euclid(2.0 * PI) / step;
        let lo = (x.floor() as usize) % n;
        let hi = (lo + 1) % n;
        let frac = x - x.floor();
        self.values[lo] * (1.0 - frac) + self.values[hi] * frac
    }

    /// Interpolated onto an `n`-node grid.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        if n == self.len() {
            return Ok(self.clone());
        }
        Self::from_fn(n, |t| self.eval(t))
    }
}

pub(crate) fn grid_node(m: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * (m + 1) as f64 / n as f64
}

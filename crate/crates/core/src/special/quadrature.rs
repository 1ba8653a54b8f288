use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{GvmError, Result};

/// Hard cap on the number of trapezoid nodes.
pub const MAX_NODES: usize = 1 << 20;

/// Settings for the refined periodic trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Initial number of equispaced nodes on `(-pi, pi]`.
    pub num_nodes: usize,
    /// Node multiplier applied at each refinement.
    pub refinement_factor: usize,
    /// Stop once successive estimates differ by less than this.
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            num_nodes: 32,
            refinement_factor: 2,
            abs_tol: 1e-12,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes < 16 {
            return Err(GvmError::InvalidParameter(format!(
                "quadrature needs at least 16 nodes, got {}",
                self.num_nodes
            )));
        }
        if self.refinement_factor < 2 {
            return Err(GvmError::InvalidParameter(
                "quadrature refinement factor must be at least 2".into(),
            ));
        }
        if !(self.abs_tol >= 100.0 * f64::EPSILON) || !self.abs_tol.is_finite() {
            return Err(GvmError::InvalidParameter(format!(
                "quadrature tolerance {} below 100 machine epsilons",
                self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Node `m` (1-based) of the `n`-point equispaced grid on `(-pi, pi]`.
#[inline]
pub(crate) fn node(m: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * m as f64 / n as f64
}

fn trapezoid<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let sum: f64 = (1..=n).map(|m| f(node(m, n))).sum();
    2.0 * PI * sum / n as f64
}

/// Integral of a smooth `2 pi`-periodic function over `(-pi, pi]`.
///
/// Uses the equispaced trapezoid rule, multiplying the node count by
/// `spec.refinement_factor` until two successive estimates differ by less
/// than `spec.abs_tol`.
pub fn quad_periodic<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let mut n = spec.num_nodes;
    let mut previous = trapezoid(&f, n);
    loop {
        let next = n * spec.refinement_factor;
        if next > MAX_NODES {
            return Err(GvmError::QuadratureFailure {
                nodes: n,
                last_change: f64::NAN,
            });
        }
        let current = trapezoid(&f, next);
        let change = (current - previous).abs();
        if change < spec.abs_tol {
            return Ok(current);
        }
        if !change.is_finite() {
            return Err(GvmError::QuadratureFailure {
                nodes: next,
                last_change: change,
            });
        }
        previous = current;
        n = next;
    }
}

/// Vector form of [`quad_periodic`]: integrates `f(theta) * e^{i r theta}` for
/// `r = 0..=rmax` on a shared grid and refines until every coefficient has
/// settled. Returns `(cosine, sine)` integrals.
pub(crate) fn quad_periodic_harmonics<F: Fn(f64) -> f64>(
    f: F,
    rmax: usize,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>)> {
    spec.validate()?;
    // enough nodes to resolve the highest harmonic before comparing estimates
    let mut n = spec.num_nodes.max((4 * (rmax + 1)).next_power_of_two());
    let mut previous = harmonic_sums(&f, rmax, n);
    loop {
        let next = n * spec.refinement_factor;
        if next > MAX_NODES {
            return Err(GvmError::QuadratureFailure {
                nodes: n,
                last_change: f64::NAN,
            });
        }
        let current = harmonic_sums(&f, rmax, next);
        let change = previous
            .0
            .iter()
            .zip(&current.0)
            .chain(previous.1.iter().zip(&current.1))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if change < spec.abs_tol {
            return Ok(current);
        }
        if !change.is_finite() {
            return Err(GvmError::QuadratureFailure {
                nodes: next,
                last_change: change,
            });
        }
        previous = current;
        n = next;
    }
}

fn harmonic_sums<F: Fn(f64) -> f64>(f: &F, rmax: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(rmax < n);
    let w = 2.0 * PI / n as f64;
    // node(m, n) for m = n coincides with index 0 of the transform
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(f(node(if j == 0 { n } else { j }, n)) * w, 0.0))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    // theta_m = -pi + 2 pi m / n contributes the extra factor (-1)^r
    let mut cos_sums = Vec::with_capacity(rmax + 1);
    let mut sin_sums = Vec::with_capacity(rmax + 1);
    for (r, z) in buf.iter().take(rmax + 1).enumerate() {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        cos_sums.push(sign * z.re);
        sin_sums.push(sign * z.im);
    }
    (cos_sums, sin_sums)
}

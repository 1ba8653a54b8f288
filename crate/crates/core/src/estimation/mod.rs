//! Sample statistics and the trigonometric method of moments.

mod moments;
mod sample;

use std::f64::consts::PI;

use crate::error::{GvmError, Result};
use crate::spectrum::TabulatedDensity;

pub use moments::{solve_moments, solve_vm, FitReport, SolverConfig};
pub use sample::{
    acvf_from_periodogram, periodogram, periodogram_on_grid, sample_acvf, ComplexSeries,
    PeriodogramPoint,
};

/// Burg entropy `B(f) = int log f(theta) d theta`.
pub fn burg_entropy(f: &TabulatedDensity) -> Result<f64> {
    let mut sum = 0.0;
    for (m, &v) in f.values().iter().enumerate() {
        if v <= 0.0 {
            return Err(GvmError::Domain(format!(
                "Burg entropy needs a positive density, value {v} at node {m}"
            )));
        }
        sum += v.ln();
    }
    Ok(2.0 * PI * sum / f.len() as f64)
}

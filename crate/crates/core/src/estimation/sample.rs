use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{GvmError, Result};
use crate::spectrum::Acvf;

/// A finite sample `X_1..X_n` of a complex-valued series.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    values: Vec<Complex64>,
}

impl ComplexSeries {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(GvmError::Range(format!(
                "a series needs at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GvmError::InvalidParameter(format!(
                "observation {} is not finite",
                j + 1
            )));
        }
        Ok(ComplexSeries { values })
    }

    /// Real-valued series.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.len() as f64
    }

    fn centered(&self) -> Vec<Complex64> {
        let m = self.mean();
        self.values.iter().map(|x| x - m).collect()
    }
}

/// Sample autocovariance
/// `psi_hat(r) = n^-1 sum_{j=1}^{n-r} (X_{j+r} - M) conj(X_j - M)`, `r = 0..=max_lag`.
pub fn sample_acvf(x: &ComplexSeries, max_lag: usize) -> Result<Acvf> {
    let n = x.len();
    if max_lag > n - 1 {
        return Err(GvmError::Range(format!(
            "max lag {max_lag} exceeds n - 1 = {}",
            n - 1
        )));
    }
    let d = x.centered();
    let lag = |r: usize| -> Complex64 {
        d[r..]
            .iter()
            .zip(&d[..n - r])
            .map(|(later, earlier)| later * earlier.conj())
            .sum::<Complex64>()
            / n as f64
    };
    let sigma2 = lag(0).re;
    Acvf::new(sigma2, (1..=max_lag).map(lag).collect())
}

/// One periodogram ordinate at the angular frequency `2 pi index / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodogramPoint {
    pub index: i64,
    pub freq: f64,
    pub value: f64,
}

/// Periodogram `Lambda(j) = sum_{|r| < n} psi_hat(r) e^{-i 2 pi j r / n}` at the
/// Fourier frequencies, `j = -floor((n-1)/2), ..., floor(n/2)`.
///
/// The zero frequency is included; it vanishes because the sample is
/// centred.
pub fn periodogram(x: &ComplexSeries) -> Vec<PeriodogramPoint> {
    periodogram_on_grid(x, x.len()).expect("the Fourier grid always has m = n")
}

/// Periodogram on the finer grid `2 pi j / m`, `m >= n`. With `m >= 2n - 1`
/// the inverse transform returns the sample autocovariance without
/// wrap-around.
pub fn periodogram_on_grid(x: &ComplexSeries, m: usize) -> Result<Vec<PeriodogramPoint>> {
    let n = x.len();
    if m < n {
        return Err(GvmError::Range(format!("grid size {m} is below the series length {n}")));
    }
    let mut buf = x.centered();
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let lo = -(((m - 1) / 2) as i64);
    let hi = (m / 2) as i64;
    Ok((lo..=hi)
        .map(|j| PeriodogramPoint {
            index: j,
            freq: 2.0 * PI * j as f64 / m as f64,
            value: buf[j.rem_euclid(m as i64) as usize].norm_sqr() / n as f64,
        })
        .collect())
}

/// Inverse transform `m^-1 sum_j Lambda(j) e^{i 2 pi j r / m}`, `r = 0..=max_lag`,
/// of a periodogram on an `m`-point grid. On the Fourier grid (`m = n`) this
/// is the circular autocovariance `psi_hat(r) + psi_hat(r - n)`.
pub fn acvf_from_periodogram(points: &[PeriodogramPoint], max_lag: usize) -> Vec<Complex64> {
    let m = points.len() as f64;
    (0..=max_lag)
        .map(|r| {
            points
                .iter()
                .map(|p| p.value * Complex64::from_polar(1.0, 2.0 * PI * (p.index as f64) * r as f64 / m))
                .sum::<Complex64>()
                / m
        })
        .collect()
}

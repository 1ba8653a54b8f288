//! Modified Bessel functions of the first kind and integer order, real argument.
//!
//! Small arguments use the ascending power series. Larger arguments use
//! Miller's backward recurrence normalised through `exp(z) = I_0(z) + 2 sum I_k(z)`,
//! which yields the exponentially scaled values `exp(-z) I_n(z)` without
//! overflow for any finite `z`.

use crate::error::{GvmError, Result};

/// Arguments above this bound overflow `exp(z)` in the unscaled functions.
pub const BESSEL_OVERFLOW_LIMIT: f64 = 650.0;

/// Power series is used up to this argument.
const SERIES_LIMIT: f64 = 15.0;

fn check_argument(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(GvmError::InvalidParameter(format!(
            "bessel argument must be finite and nonnegative, got {z}"
        )));
    }
    Ok(())
}

/// `I_n(z)` by the ascending series `sum_m (z/2)^(2m+n) / (m! (m+n)!)`.
fn power_series(n: usize, z: f64) -> f64 {
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * z;
    // (z/2)^n / n!, built as a product so large n underflows gracefully
    let mut lead = 1.0;
    for i in 1..=n {
        lead *= half / i as f64;
        if lead == 0.0 {
            return 0.0;
        }
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * (m + n as f64));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

/// Exponentially scaled values `exp(-z) I_j(z)` for `j = 0..=nmax` by Miller's
/// backward recurrence.
fn miller_scaled(nmax: usize, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if z == 0.0 {
        out[0] = 1.0;
        return out;
    }
    // I_n(z)/I_0(z) ~ exp(-n^2 / 2z) until n ~ z; sqrt(120 z) leaves ~e^-60
    let extra = (120.0 * z).sqrt().ceil() as usize + 30;
    let start = (nmax + extra) | 1;
    let two_over_z = 2.0 / z;
    let mut above = 0.0_f64;
    let mut current = 1e-30_f64;
    let mut norm = 0.0_f64;
    for m in (1..=start).rev() {
        // I_{m-1} = I_{m+1} + (2m/z) I_m
        let below = above + m as f64 * two_over_z * current;
        above = current;
        current = below;
        let idx = m - 1;
        if idx >= 1 {
            norm += 2.0 * current;
        }
        if idx <= nmax {
            out[idx] = current;
        }
        if current > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    norm += current;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Exponentially scaled Bessel sequence `exp(-z) I_j(z)`, `j = 0..=nmax`.
pub fn bessel_i_scaled_seq(nmax: usize, z: f64) -> Result<Vec<f64>> {
    check_argument(z)?;
    if z <= SERIES_LIMIT {
        let scale = (-z).exp();
        let mut out = Vec::with_capacity(nmax + 1);
        for n in 0..=nmax {
            let v = power_series(n, z);
            out.push(v * scale);
            if v == 0.0 {
                out.resize(nmax + 1, 0.0);
                break;
            }
        }
        Ok(out)
    } else {
        Ok(miller_scaled(nmax, z))
    }
}

/// Exponentially scaled Bessel function `exp(-z) I_n(z)`, defined for every
/// finite `z >= 0`.
pub fn bessel_i_scaled(n: u32, z: f64) -> Result<f64> {
    check_argument(z)?;
    if z <= SERIES_LIMIT {
        Ok(power_series(n as usize, z) * (-z).exp())
    } else {
        Ok(miller_scaled(n as usize, z)[n as usize])
    }
}

/// Modified Bessel function of the first kind `I_n(z)` for integer `n >= 0`
/// and real `z >= 0`.
///
/// Fails with [`GvmError::BesselOverflow`] for `z > 650`; use
/// [`bessel_i_scaled`] there.
pub fn bessel_i(n: u32, z: f64) -> Result<f64> {
    check_argument(z)?;
    if z > BESSEL_OVERFLOW_LIMIT {
        return Err(GvmError::BesselOverflow(z));
    }
    if z <= SERIES_LIMIT {
        Ok(power_series(n as usize, z))
    } else {
        Ok(miller_scaled(n as usize, z)[n as usize] * z.exp())
    }
}

/// Ratio `I_1(kappa) / I_0(kappa)`, the mean resultant length of a von Mises
/// distribution. Valid for all finite `kappa >= 0`.
pub fn bessel_ratio_10(kappa: f64) -> Result<f64> {
    let s = bessel_i_scaled_seq(1, kappa)?;
    Ok(s[1] / s[0])
}

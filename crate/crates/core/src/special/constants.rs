//! The trigonometric integral constants of the GvM_k family,
//!
//! ```text
//! G_r = int cos(r t) exp{k1 cos t + k2 cos 2(t + d1) + ... + kk cos k(t + d_{k-1})} g(t) dt
//! H_r = int sin(r t) exp{...} g(t) dt
//! A_r = G_r / G_0,  B_r = H_r / G_0
//! ```
//!
//! where `g` is the circular uniform density unless a tabulated reference
//! density is supplied. Internally everything is carried with the factor
//! `exp(-sum kappa)` pulled out, so ratios stay finite for any concentration.

use std::f64::consts::PI;

use super::bessel::bessel_i_scaled_seq;
use super::quadrature::{quad_periodic_harmonics, QuadratureSpec};
use crate::error::{GvmError, Result};
use crate::spectrum::TabulatedDensity;

/// Shape arguments of the constants: phase shifts `delta_1..delta_{k-1}` and
/// concentrations `kappa_1..kappa_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GvMShape {
    deltas: Vec<f64>,
    kappas: Vec<f64>,
}

impl GvMShape {
    pub fn new(deltas: Vec<f64>, kappas: Vec<f64>) -> Result<Self> {
        let k = kappas.len();
        if k == 0 {
            return Err(GvmError::InvalidParameter("order k must be at least 1".into()));
        }
        if deltas.len() != k - 1 {
            return Err(GvmError::InvalidParameter(format!(
                "order {k} needs {} phase shifts, got {}",
                k - 1,
                deltas.len()
            )));
        }
        for (j, &kappa) in kappas.iter().enumerate() {
            if !kappa.is_finite() || kappa < 0.0 {
                return Err(GvmError::InvalidParameter(format!(
                    "kappa_{} = {kappa} must be finite and nonnegative",
                    j + 1
                )));
            }
        }
        for (i, &delta) in deltas.iter().enumerate() {
            let j = i + 1;
            let period = 2.0 * PI / (j + 1) as f64;
            if !(0.0..period).contains(&delta) {
                return Err(GvmError::InvalidParameter(format!(
                    "delta_{j} = {delta} outside [0, 2pi/{})",
                    j + 1
                )));
            }
        }
        Ok(GvMShape { deltas, kappas })
    }

    pub fn von_mises(kappa: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![kappa])
    }

    pub fn order(&self) -> usize {
        self.kappas.len()
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub(crate) fn kappa_sum(&self) -> f64 {
        self.kappas.iter().sum()
    }

    /// `kappa_1 cos t + sum_{j>=2} kappa_j cos j(t + delta_{j-1})`.
    pub fn exponent(&self, t: f64) -> f64 {
        let mut acc = self.kappas[0] * t.cos();
        for (i, &kappa) in self.kappas.iter().enumerate().skip(1) {
            if kappa != 0.0 {
                let j = (i + 1) as f64;
                acc += kappa * (j * (t + self.deltas[i - 1])).cos();
            }
        }
        acc
    }
}

/// A tabulated reference density, rotated by `location` (the `mu_1` of the
/// tilt) so that the constants are taken in the same shifted coordinate as
/// the exponent.
#[derive(Debug, Clone, Copy)]
pub struct Reference<'a> {
    pub density: &'a TabulatedDensity,
    pub location: f64,
}

/// Constants with `exp(log_scale)` factored out.
#[derive(Debug, Clone)]
pub(crate) struct ScaledConstants {
    pub log_scale: f64,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
}

/// `A_r`, `B_r` for `r = 0..=rmax` (with `A_0 = 1`, `B_0 = 0`) and `log G_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigRatios {
    pub log_g0: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl TrigRatios {
    pub fn max_r(&self) -> usize {
        self.a.len() - 1
    }
}

pub(crate) fn scaled_constants(
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    rmax: usize,
    quad: &QuadratureSpec,
) -> Result<ScaledConstants> {
    match reference {
        Some(reference) => Ok(tabulated_constants(shape, reference, rmax)),
        None if shape.order() <= 2 => series_constants(shape, rmax, quad.abs_tol),
        None => quadrature_constants(shape, rmax, quad),
    }
}

/// Bessel-product expansion for `k <= 2` and the uniform reference.
fn series_constants(shape: &GvMShape, rmax: usize, abs_tol: f64) -> Result<ScaledConstants> {
    let k1 = shape.kappas[0];
    let k2 = shape.kappas.get(1).copied().unwrap_or(0.0);
    let delta = shape.deltas.first().copied().unwrap_or(0.0);
    let log_scale = k1 + k2;

    // I_j(k2)/I_0(k2) ~ exp(-j^2 / 2 k2): sqrt(120 k2) reaches e^-60
    let jcap = if k2 > 0.0 {
        (120.0 * k2).sqrt().ceil() as usize + 30
    } else {
        0
    };
    let s2 = bessel_i_scaled_seq(jcap, k2)?;
    let s1 = bessel_i_scaled_seq(2 * jcap + rmax, k1)?;
    let g0_scale = s2[0] * s1[0];
    let threshold = (0.1 * abs_tol * (-log_scale).exp()).max(1e-18 * g0_scale);

    let mut g = Vec::with_capacity(rmax + 1);
    let mut h = Vec::with_capacity(rmax + 1);
    for r in 0..=rmax {
        let mut gr = s2[0] * s1[r];
        let mut hr = 0.0;
        let mut small = 0;
        for j in 1..=jcap {
            let plus = s1[2 * j + r];
            let minus = s1[(2 * j).abs_diff(r)];
            let weight = s2[j];
            let (sin2, cos2) = (2.0 * j as f64 * delta).sin_cos();
            gr += cos2 * weight * (plus + minus);
            hr += sin2 * weight * (plus - minus);
            if weight * (plus + minus) < threshold {
                small += 1;
                if small == 2 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        g.push(gr);
        h.push(hr);
    }
    Ok(ScaledConstants { log_scale, g, h })
}

fn quadrature_constants(
    shape: &GvMShape,
    rmax: usize,
    quad: &QuadratureSpec,
) -> Result<ScaledConstants> {
    let log_scale = shape.kappa_sum();
    let integrand = |t: f64| (shape.exponent(t) - log_scale).exp() / (2.0 * PI);
    let (g, h) = quad_periodic_harmonics(integrand, rmax, quad)?;
    Ok(ScaledConstants { log_scale, g, h })
}

/// Trapezoid sums on the reference's own grid. The reference is evaluated at
/// its nodes `theta_m` and the exponent at the shifted angle
/// `theta_m - location`, which keeps tilts exactly mass-preserving on the grid.
fn tabulated_constants(
    shape: &GvMShape,
    reference: Reference<'_>,
    rmax: usize,
) -> ScaledConstants {
    let density = reference.density;
    let n = density.len();
    let w = 2.0 * PI / n as f64 / density.mass();
    let log_scale = shape.kappa_sum();
    let mut g = vec![0.0; rmax + 1];
    let mut h = vec![0.0; rmax + 1];
    for (m, &value) in density.values().iter().enumerate() {
        if value == 0.0 {
            continue;
        }
        let t = density.node(m) - reference.location;
        let weight = w * value * (shape.exponent(t) - log_scale).exp();
        for r in 0..=rmax {
            let (s, c) = (r as f64 * t).sin_cos();
            g[r] += weight * c;
            h[r] += weight * s;
        }
    }
    ScaledConstants { log_scale, g, h }
}

fn unscale(value: f64, log_scale: f64) -> Result<f64> {
    let out = value * log_scale.exp();
    if out.is_finite() {
        Ok(out)
    } else {
        Err(GvmError::Range(format!(
            "integral constant overflows f64 (log scale {log_scale})"
        )))
    }
}

/// `G_r^{(k)}(delta, kappa; g)`.
///
/// Order `k <= 2` with the uniform reference uses the Bessel-product series;
/// everything else is integrated numerically.
pub fn g_const(
    r: usize,
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let c = scaled_constants(shape, reference, r, quad)?;
    unscale(c.g[r], c.log_scale)
}

/// `H_r^{(k)}(delta, kappa; g)` for `r >= 1`.
pub fn h_const(
    r: usize,
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if r == 0 {
        return Err(GvmError::InvalidParameter("H_r is defined for r >= 1".into()));
    }
    let c = scaled_constants(shape, reference, r, quad)?;
    unscale(c.h[r], c.log_scale)
}

/// `(A_r, B_r) = (G_r / G_0, H_r / G_0)` for `r >= 1`.
pub fn ab_ratios(
    r: usize,
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    if r == 0 {
        return Err(GvmError::InvalidParameter("A_r, B_r are defined for r >= 1".into()));
    }
    let t = trig_ratios(shape, reference, r, quad)?;
    Ok((t.a[r], t.b[r]))
}

/// All ratios `A_0..A_rmax`, `B_0..B_rmax` together with `log G_0`.
pub fn trig_ratios(
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    rmax: usize,
    quad: &QuadratureSpec,
) -> Result<TrigRatios> {
    let c = scaled_constants(shape, reference, rmax, quad)?;
    let g0 = c.g[0];
    if !(g0 > 0.0) {
        return Err(GvmError::Range(format!(
            "normalising constant underflowed (scaled G_0 = {g0})"
        )));
    }
    Ok(TrigRatios {
        log_g0: c.log_scale + g0.ln(),
        a: c.g.iter().map(|g| g / g0).collect(),
        b: c.h.iter().map(|h| h / g0).collect(),
    })
}

/// Ratios for `r = 0..=R`, where `R >= min_r` grows until two consecutive
/// `|A_r| + |B_r|` fall below `1e-15` (or `cap` is reached). Higher orders are
/// zero to double precision.
pub fn trig_ratios_until_negligible(
    shape: &GvMShape,
    reference: Option<Reference<'_>>,
    min_r: usize,
    cap: usize,
    quad: &QuadratureSpec,
) -> Result<TrigRatios> {
    let mut rmax = min_r.max(16).min(cap.max(min_r));
    loop {
        let t = trig_ratios(shape, reference, rmax, quad)?;
        let negligible = |r: usize| t.a[r].abs() + t.b[r].abs() < 1e-15;
        if let Some(r) = (2..=rmax).find(|&r| r >= 2 && negligible(r) && negligible(r - 1)) {
            let keep = r.max(min_r);
            return Ok(TrigRatios {
                log_g0: t.log_g0,
                a: t.a[..=keep].to_vec(),
                b: t.b[..=keep].to_vec(),
            });
        }
        if rmax >= cap {
            return Ok(t);
        }
        rmax = (2 * rmax).min(cap);
    }
}

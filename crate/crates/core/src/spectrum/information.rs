//! Kullback-Leibler information, spectral (Shannon) entropy, exponential tilts
//! and the minimal-information bound of the tilt.
//!
//! Tabulated densities are integrated with the trapezoid rule on their own
//! grid, which is spectrally accurate for smooth periodic densities.

use std::f64::consts::PI;

use super::{Acvf, GvMParams, TabulatedDensity};
use crate::error::{GvmError, Result};
use crate::special::{trig_ratios, QuadratureSpec, Reference};

/// Brings two tables onto a common grid (the finer of the two).
fn common_grid(
    f: &TabulatedDensity,
    g: &TabulatedDensity,
) -> Result<(TabulatedDensity, TabulatedDensity)> {
    let n = f.len().max(g.len());
    Ok((f.resampled(n)?, g.resampled(n)?))
}

/// `I(f | g) = int log(f / g) f`, with `0 log 0 = 0`.
///
/// Both densities must carry the same mass (to `1e-8` relative).
pub fn kl_information(f: &TabulatedDensity, g: &TabulatedDensity) -> Result<f64> {
    let scale = f.mass().max(g.mass());
    if (f.mass() - g.mass()).abs() > 1e-8 * scale {
        return Err(GvmError::InvalidParameter(format!(
            "densities must have equal mass, got {} and {}",
            f.mass(),
            g.mass()
        )));
    }
    let (f, g) = common_grid(f, g)?;
    let mut sum = 0.0;
    for (&fv, &gv) in f.values().iter().zip(g.values()) {
        if fv == 0.0 {
            continue;
        }
        if gv == 0.0 {
            return Err(GvmError::InfiniteDivergence);
        }
        sum += fv * (fv / gv).ln();
    }
    Ok(2.0 * PI * sum / f.len() as f64)
}

/// `S(f) = -I(f | u)` with `u` the flat density of the same mass.
pub fn spectral_entropy(f: &TabulatedDensity) -> Result<f64> {
    let uniform = TabulatedDensity::uniform(f.len(), f.mass())?;
    Ok(-kl_information(f, &uniform)?)
}

/// Closed-form spectral entropy of a GvM_k spectrum,
///
/// ```text
/// sigma2 { log G_0 - kappa_1 A_1 - sum_{r=2}^k kappa_r [A_r cos r delta_{r-1} - B_r sin r delta_{r-1}] }
/// ```
pub fn gvm_entropy(params: &GvMParams) -> Result<f64> {
    let k = params.order();
    let deltas = params.deltas();
    let kappas = params.kappas();
    let t = trig_ratios(&params.shape(), None, k, &QuadratureSpec::default())?;
    let mut inner = t.log_g0 - kappas[0] * t.a[1];
    for r in 2..=k {
        let (s, c) = (r as f64 * deltas[r - 2]).sin_cos();
        inner -= kappas[r - 1] * (t.a[r] * c - t.b[r] * s);
    }
    Ok(params.sigma2() * inner)
}

fn tilt_params(mass: f64, mus: &[f64], kappas: &[f64]) -> Result<GvMParams> {
    GvMParams::new(mass, mus.to_vec(), kappas.to_vec())
}

/// Exponential tilt `h(theta) exp{sum_j kappa_j cos j(theta - mu_j)} / G_0(h)`,
/// normalised on `h`'s grid so the mass is preserved exactly.
pub fn exponential_tilt(
    h: &TabulatedDensity,
    mus: &[f64],
    kappas: &[f64],
) -> Result<TabulatedDensity> {
    let p = tilt_params(h.mass(), mus, kappas)?;
    let reference = Reference {
        density: h,
        location: p.mus()[0],
    };
    let t = trig_ratios(&p.shape(), Some(reference), 0, &QuadratureSpec::default())?;
    let values = h
        .values()
        .iter()
        .enumerate()
        .map(|(m, &v)| v * (p.exponent(h.node(m)) - t.log_g0).exp())
        .collect();
    TabulatedDensity::new(values)
}

/// Lower bound on `I(g | h)` over spectra `g` matching `target`:
///
/// ```text
/// -sigma2 log G_0(delta, kappa; h) + sum_r kappa_r (nu_r cos r mu_r + xi_r sin r mu_r)
/// ```
///
/// attained by the tilt of `h` whose parameters solve the moment equations.
/// `h = None` means the flat reference.
pub fn kl_bound(
    mus: &[f64],
    kappas: &[f64],
    target: &Acvf,
    h: Option<&TabulatedDensity>,
) -> Result<f64> {
    let sigma2 = target.sigma2();
    let p = tilt_params(1.0, mus, kappas)?;
    let k = p.order();
    if target.max_lag() < k {
        return Err(GvmError::Range(format!(
            "bound of order {k} needs {k} lags, target has {}",
            target.max_lag()
        )));
    }
    let reference = h.map(|density| Reference {
        density,
        location: p.mus()[0],
    });
    let t = trig_ratios(&p.shape(), reference, 0, &QuadratureSpec::default())?;
    let mut bound = -sigma2 * t.log_g0;
    for r in 1..=k {
        let psi = target.lag(r as isize);
        let (s, c) = (r as f64 * p.mus()[r - 1]).sin_cos();
        bound += p.kappas()[r - 1] * (psi.re * c + psi.im * s);
    }
    Ok(bound)
}

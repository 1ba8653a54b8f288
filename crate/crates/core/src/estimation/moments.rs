//! Trigonometric method of moments: find the GvM_k (or tilted-reference)
//! parameters whose autocovariances match a target,
//!
//! ```text
//! psi_r = sigma2 e^{i r mu_1} (A_r + i B_r),   r = 1..k.
//! ```
//!
//! The system is solved in the natural coordinates
//! `eta_r = kappa_r (cos r mu_r, sin r mu_r)`, where it is the stationarity
//! condition of the strictly convex dual `log G_0(eta) - <eta, psi / sigma2>`.
//! Damped Newton on the dual has the autocovariance mismatch as gradient and
//! the covariance of `(cos r theta, sin r theta)` under the fitted model as
//! Hessian, both available in closed form from `A_r`, `B_r` up to `r = 2k`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GvmError, Result};
use crate::special::{bessel_i_scaled_seq, trig_ratios, QuadratureSpec, Reference};
use crate::spectrum::{wrap_angle, Acvf, GvMParams, TabulatedDensity};

/// Concentrations above this are treated as a failed step.
const KAPPA_LIMIT: f64 = 1e6;

/// Required margin `|psi_r| <= (1 - FEASIBILITY_MARGIN) sigma2`.
const FEASIBILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Convergence threshold on the Euclidean norm of the `2k` moment
    /// equations, in units of `sigma2`.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Starting points per angular dimension when the flat-spectrum start
    /// fails.
    pub multistart_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            residual_tol: 1e-10,
            max_iter: 200,
            multistart_grid: 8,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0) || self.max_iter == 0 || self.multistart_grid == 0 {
            return Err(GvmError::InvalidParameter(
                "solver tolerance, iteration cap and multistart grid must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub params: GvMParams,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Natural parameters `(eta_1c, eta_1s, ..., eta_kc, eta_ks)` to
/// `(mu, kappa)`; unit mass.
fn natural_to_params(eta: &[f64]) -> Result<GvMParams> {
    let k = eta.len() / 2;
    let mut mus = Vec::with_capacity(k);
    let mut kappas = Vec::with_capacity(k);
    for j in 0..k {
        let (c, s) = (eta[2 * j], eta[2 * j + 1]);
        let order = (j + 1) as f64;
        kappas.push(c.hypot(s));
        mus.push(wrap_angle(s.atan2(c) / order, 2.0 * PI / order));
    }
    GvMParams::new(1.0, mus, kappas)
}

fn params_to_natural(params: &GvMParams) -> Vec<f64> {
    params
        .mus()
        .iter()
        .zip(params.kappas())
        .enumerate()
        .flat_map(|(j, (&mu, &kappa))| {
            let (s, c) = ((j + 1) as f64 * mu).sin_cos();
            [kappa * c, kappa * s]
        })
        .collect()
}

/// Model quantities at a point of the natural parameter space.
struct ModelState {
    params: GvMParams,
    log_g0: f64,
    /// `E[e^{i r theta}]`, `r = 0..=2k`.
    moments: Vec<Complex64>,
}

struct Problem<'a> {
    k: usize,
    /// `psi_r / sigma2`, `r = 1..=k`.
    targets: Vec<Complex64>,
    reference: Option<&'a TabulatedDensity>,
    quad: QuadratureSpec,
}

impl Problem<'_> {
    fn state(&self, eta: &[f64]) -> Result<ModelState> {
        let params = natural_to_params(eta)?;
        if params.kappas().iter().any(|&k| k > KAPPA_LIMIT) {
            return Err(GvmError::Range("concentration left the working range".into()));
        }
        let mu1 = params.mus()[0];
        let reference = self.reference.map(|density| Reference {
            density,
            location: mu1,
        });
        let t = trig_ratios(&params.shape(), reference, 2 * self.k, &self.quad)?;
        let moments = (0..=2 * self.k)
            .map(|r| Complex64::from_polar(1.0, r as f64 * mu1) * Complex64::new(t.a[r], t.b[r]))
            .collect();
        Ok(ModelState {
            params,
            log_g0: t.log_g0,
            moments,
        })
    }

    fn dual(&self, eta: &[f64], state: &ModelState) -> f64 {
        let linear: f64 = self
            .targets
            .iter()
            .enumerate()
            .map(|(j, m)| eta[2 * j] * m.re + eta[2 * j + 1] * m.im)
            .sum();
        state.log_g0 - linear
    }

    fn gradient(&self, state: &ModelState) -> DVector<f64> {
        DVector::from_iterator(
            2 * self.k,
            (0..self.k).flat_map(|j| {
                let d = state.moments[j + 1] - self.targets[j];
                [d.re, d.im]
            }),
        )
    }

    /// Covariance of `(cos r theta, sin r theta)_{r=1..k}` under the model.
    fn hessian(&self, state: &ModelState) -> DMatrix<f64> {
        let m = |r: i64| -> Complex64 {
            if r >= 0 {
                state.moments[r as usize]
            } else {
                state.moments[(-r) as usize].conj()
            }
        };
        let n = 2 * self.k;
        DMatrix::from_fn(n, n, |p, q| {
            let (a, sa) = ((p / 2 + 1) as i64, p % 2 == 1);
            let (b, sb) = ((q / 2 + 1) as i64, q % 2 == 1);
            let (plus, minus) = (m(a + b), m(a - b));
            let second = match (sa, sb) {
                (false, false) => 0.5 * (plus.re + minus.re),
                (true, true) => 0.5 * (minus.re - plus.re),
                (false, true) => 0.5 * (plus.im - minus.im),
                (true, false) => 0.5 * (plus.im + minus.im),
            };
            let ea = if sa { m(a).im } else { m(a).re };
            let eb = if sb { m(b).im } else { m(b).re };
            second - ea * eb
        })
    }

    /// Damped Newton from `start`; returns the final report and whether the
    /// tolerance was met.
    fn newton(&self, start: Vec<f64>, cfg: &SolverConfig) -> Result<FitReport> {
        let mut eta = start;
        let mut state = self.state(&eta)?;
        let mut value = self.dual(&eta, &state);
        let mut iterations = 0;
        loop {
            let grad = self.gradient(&state);
            let residual = grad.norm();
            if residual <= cfg.residual_tol || iterations >= cfg.max_iter {
                return Ok(FitReport {
                    params: state.params,
                    residual_norm: residual,
                    iterations,
                    converged: residual <= cfg.residual_tol,
                });
            }
            iterations += 1;
            let step = newton_direction(self.hessian(&state), &grad);
            let slope = grad.dot(&step);
            let mut t = 1.0;
            let mut accepted = None;
            while t > 1e-12 {
                let trial: Vec<f64> = eta.iter().zip(step.iter()).map(|(e, d)| e + t * d).collect();
                if let Ok(trial_state) = self.state(&trial) {
                    let trial_value = self.dual(&trial, &trial_state);
                    // Armijo; the second clause accepts round-off level changes near the optimum
                    if trial_value <= value + 1e-4 * t * slope
                        || (trial_value - value).abs() <= 1e-15 * value.abs().max(1.0)
                    {
                        accepted = Some((trial, trial_state, trial_value));
                        break;
                    }
                }
                t *= 0.5;
            }
            match accepted {
                Some((e, s, v)) => {
                    eta = e;
                    state = s;
                    value = v;
                }
                None => {
                    return Ok(FitReport {
                        params: state.params,
                        residual_norm: residual,
                        iterations,
                        converged: false,
                    })
                }
            }
        }
    }
}

/// Solves `H d = -g`, regularising `H` if it is not numerically positive
/// definite.
fn newton_direction(hessian: DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    let n = grad.len();
    let mut shift = 0.0;
    loop {
        let h = &hessian + DMatrix::identity(n, n) * shift;
        if let Some(chol) = h.cholesky() {
            return chol.solve(&(-grad));
        }
        shift = if shift == 0.0 { 1e-12 } else { shift * 10.0 };
        if shift > 1e3 {
            return -grad.clone();
        }
    }
}

fn check_feasible(target: &Acvf, k: usize) -> Result<()> {
    let sigma2 = target.sigma2();
    for r in 1..=k {
        let modulus = target.lag(r as isize).norm();
        if modulus > (1.0 - FEASIBILITY_MARGIN) * sigma2 {
            return Err(GvmError::Infeasible(format!(
                "|psi({r})| = {modulus} is not below psi(0) = {sigma2}"
            )));
        }
    }
    let head = target.truncated(k)?;
    let min = head.toeplitz_min_eigenvalue();
    if min < -1e-10 * sigma2 {
        return Err(GvmError::Infeasible(format!(
            "Toeplitz matrix of psi(0..{k}) has eigenvalue {min:e}"
        )));
    }
    Ok(())
}

fn null_fit(k: usize) -> FitReport {
    FitReport {
        params: GvMParams::null(k),
        residual_norm: 0.0,
        iterations: 0,
        converged: true,
    }
}

fn rescale(report: FitReport, sigma2: f64) -> Result<FitReport> {
    Ok(FitReport {
        params: report.params.with_sigma2(sigma2)?,
        ..report
    })
}

/// Multistart points over `mu_1` and the phase shifts, concentrations seeded
/// from the first-lag von Mises fit.
fn grid_starts(k: usize, kappa1: f64, grid: usize) -> Vec<Vec<f64>> {
    let mut starts = Vec::new();
    let total = grid.pow(k as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut coord = |period: f64| {
            let i = rest % grid;
            rest /= grid;
            (i as f64 + 0.5) * period / grid as f64
        };
        let mu1 = coord(2.0 * PI) - PI;
        let mut mus = vec![mu1];
        for j in 1..k {
            let period = 2.0 * PI / (j + 1) as f64;
            let delta = coord(period);
            mus.push(wrap_angle(mu1 - delta, period));
        }
        let mut kappas = vec![0.5; k];
        kappas[0] = kappa1.max(0.5);
        if let Ok(p) = GvMParams::new(1.0, mus, kappas) {
            starts.push(params_to_natural(&p));
        }
    }
    starts
}

/// Solves the order-`k` moment equations for `target`. `h` is the reference
/// spectrum of the tilt; `None` gives the maximum-entropy GvM_k solution.
pub fn solve_moments(
    target: &Acvf,
    k: usize,
    h: Option<&TabulatedDensity>,
    cfg: &SolverConfig,
) -> Result<FitReport> {
    cfg.validate()?;
    if k == 0 {
        return Err(GvmError::InvalidParameter("order k must be at least 1".into()));
    }
    if target.max_lag() < k {
        return Err(GvmError::Range(format!(
            "order {k} needs {k} autocovariance lags, target has {}",
            target.max_lag()
        )));
    }
    let sigma2 = target.sigma2();
    if sigma2 == 0.0 {
        return Ok(null_fit(k));
    }
    check_feasible(target, k)?;

    let problem = Problem {
        k,
        targets: (1..=k).map(|r| target.lag(r as isize) / sigma2).collect(),
        reference: h,
        quad: QuadratureSpec::default(),
    };

    let first = problem.newton(vec![0.0; 2 * k], cfg);
    if let Ok(report) = &first {
        if report.converged {
            return rescale(report.clone(), sigma2);
        }
    }

    let kappa1 = inverse_a1(problem.targets[0].norm()).map(|(k, _)| k).unwrap_or(1.0);
    let runs: Vec<FitReport> = grid_starts(k, kappa1, cfg.multistart_grid)
        .into_par_iter()
        .filter_map(|start| problem.newton(start, cfg).ok())
        .collect();
    let best = runs
        .iter()
        .chain(first.as_ref().ok())
        .min_by(|a, b| {
            let tie = |r: &FitReport| r.params.kappas().iter().map(|k| k * k).sum::<f64>();
            a.residual_norm
                .total_cmp(&b.residual_norm)
                .then(tie(a).total_cmp(&tie(b)))
        })
        .cloned();
    match best {
        Some(report) if report.converged => rescale(report, sigma2),
        Some(report) => Err(GvmError::NoConvergence {
            residual: report.residual_norm,
            iterations: report.iterations,
        }),
        None => Err(GvmError::NoConvergence {
            residual: f64::INFINITY,
            iterations: 0,
        }),
    }
}

fn a1(kappa: f64) -> Result<f64> {
    let s = bessel_i_scaled_seq(1, kappa)?;
    Ok(s[1] / s[0])
}

/// Inverse of `A_1(kappa) = I_1(kappa) / I_0(kappa)` on `[0, 1)` by
/// safeguarded Newton; returns `(kappa, iterations)`.
pub(crate) fn inverse_a1(rho: f64) -> Result<(f64, usize)> {
    if !(0.0..1.0).contains(&rho) {
        return Err(GvmError::Infeasible(format!(
            "mean resultant length {rho} outside [0, 1)"
        )));
    }
    if rho == 0.0 {
        return Ok((0.0, 0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while a1(hi)? < rho {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(GvmError::Infeasible(format!("mean resultant length {rho} too close to 1")));
        }
    }
    // Best & Fisher starting value
    let guess = if rho < 0.53 {
        2.0 * rho + rho.powi(3) + 5.0 * rho.powi(5) / 6.0
    } else if rho < 0.85 {
        -0.4 + 1.39 * rho + 0.43 / (1.0 - rho)
    } else {
        1.0 / (rho.powi(3) - 4.0 * rho.powi(2) + 3.0 * rho)
    };
    let mut kappa = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let mut iterations = 0;
    while iterations < 200 {
        iterations += 1;
        let a = a1(kappa)?;
        let f = a - rho;
        if f.abs() <= 4.0 * f64::EPSILON * rho.max(1e-300) {
            break;
        }
        if f < 0.0 {
            lo = kappa;
        } else {
            hi = kappa;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let slope = if kappa > 0.0 { 1.0 - a / kappa - a * a } else { 0.5 };
        let next = kappa - f / slope;
        kappa = if slope > 0.0 && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok((kappa, iterations))
}

/// Closed-form von Mises fit: `mu_1 = arg psi_1`,
/// `kappa_1 = A_1^{-1}(|psi_1| / sigma2)`.
pub fn solve_vm(target: &Acvf) -> Result<FitReport> {
    if target.max_lag() < 1 {
        return Err(GvmError::Range("von Mises fit needs lag 1".into()));
    }
    let sigma2 = target.sigma2();
    if sigma2 == 0.0 {
        return Ok(null_fit(1));
    }
    let psi1 = target.lag(1);
    let rho = psi1.norm() / sigma2;
    if rho > 1.0 - FEASIBILITY_MARGIN {
        return Err(GvmError::Infeasible(format!(
            "|psi(1)| / psi(0) = {rho} is not below 1"
        )));
    }
    let (kappa, iterations) = inverse_a1(rho)?;
    let mu = if kappa == 0.0 {
        0.0
    } else {
        wrap_angle(psi1.im.atan2(psi1.re), 2.0 * PI)
    };
    let params = GvMParams::von_mises(sigma2, mu, kappa)?;
    let fitted = Complex64::from_polar(a1(kappa)?, mu);
    Ok(FitReport {
        params,
        residual_norm: (fitted - psi1 / sigma2).norm(),
        iterations,
        converged: true,
    })
}

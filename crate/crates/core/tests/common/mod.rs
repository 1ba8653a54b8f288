//! Independent reference computations for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

/// `I_n(z)` by its power series, summed in log space.
pub fn bessel_series(n: u32, z: f64) -> f64 {
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let log_half = (z / 2.0).ln();
    let lgamma = |x: f64| -> f64 {
        // ln (x - 1)! for integer x >= 1
        (1..(x as u64)).map(|i| (i as f64).ln()).sum()
    };
    let mut sum = 0.0;
    let mut m = 0u32;
    loop {
        let term = ((2 * m + n) as f64 * log_half
            - lgamma((m + 1) as f64)
            - lgamma((m + n + 1) as f64))
        .exp();
        sum += term;
        if m > 5 && term < 1e-18 * sum {
            return sum;
        }
        m += 1;
    }
}

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `int_{-pi}^{pi} f` by a 20001-node Simpson rule.
pub fn integrate_circle<F: Fn(f64) -> f64>(f: F) -> f64 {
    simpson(f, -PI, PI, 20_000)
}

/// Unnormalised GvM_k density in the shifted variable `t = theta - mu_1`.
pub fn gvm_kernel(deltas: &[f64], kappas: &[f64], t: f64) -> f64 {
    let mut e = kappas[0] * t.cos();
    for (i, &k) in kappas.iter().enumerate().skip(1) {
        e += k * ((i + 1) as f64 * (t + deltas[i - 1])).cos();
    }
    e.exp()
}

/// `psi(r)`, `r = 0..=max_lag`, of an arbitrary density by direct Simpson
/// quadrature of `f(theta) e^{i r theta}`.
pub fn acvf_by_quadrature<F: Fn(f64) -> f64>(f: F, max_lag: usize) -> Vec<Complex64> {
    (0..=max_lag)
        .map(|r| {
            let re = integrate_circle(|t| f(t) * (r as f64 * t).cos());
            let im = integrate_circle(|t| f(t) * (r as f64 * t).sin());
            Complex64::new(re, im)
        })
        .collect()
}

/// Circular distance between two angles with period `period`.
pub fn angle_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Periodic trapezoid rule with `n` nodes, `(1/2pi) int f`.
pub fn circle_mean<F: Fn(f64) -> f64>(f: F, n: usize) -> f64 {
    (0..n).map(|m| f(-PI + 2.0 * PI * m as f64 / n as f64)).sum::<f64>() / n as f64
}

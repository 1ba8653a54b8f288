//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Seeds are fixed so every run is reproducible.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use gvm_core::estimation::{acvf_from_periodogram, periodogram_on_grid};
use gvm_core::{
    build_sigma, g_const, gvm_acvf, gvm_entropy, h_const, kl_information, periodogram,
    sample_acvf, simulate, solve_moments, spectral_entropy, temporal_entropy, Acvf,
    ComplexSeries, FitReport, GvMCdf, GvMParams, GvMShape, QuadratureSpec, SimConfig, SimMethod,
    SolverConfig, TabulatedDensity,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use common::{angle_gap, bessel_series, circle_mean, gvm_kernel, integrate_circle, simpson};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let delta = rng.random_range(0.0..PI);
        let k1 = rng.random_range(0.0..=5.0);
        let k2 = rng.random_range(0.0..=5.0);
        let shape = GvMShape::new(vec![delta], vec![k1, k2]).map_err(|e| e.to_string())?;
        for r in 0..=6usize {
            let rf = r as f64;
            let kernel = |t: f64| gvm_kernel(&[delta], &[k1, k2], t);
            let g_ref = circle_mean(|t| (rf * t).cos() * kernel(t), 512);
            let g = g_const(r, &shape, None, &quad).map_err(|e| e.to_string())?;
            worst = worst.max((g - g_ref).abs());
            check((g - g_ref).abs() < 1e-10, || {
                format!("G_{r}(delta={delta}, kappa=({k1}, {k2})) = {g}, quadrature {g_ref}")
            })?;
            if r >= 1 {
                let h_ref = circle_mean(|t| (rf * t).sin() * kernel(t), 512);
                let h = h_const(r, &shape, None, &quad).map_err(|e| e.to_string())?;
                worst = worst.max((h - h_ref).abs());
                check((h - h_ref).abs() < 1e-10, || {
                    format!("H_{r}(delta={delta}, kappa=({k1}, {k2})) = {h}, quadrature {h_ref}")
                })?;
            }
        }
    }
    Ok(format!("200 shapes, r = 0..6, max |series - quadrature| = {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let p = GvMParams::von_mises(1.0, 0.0, 1.0).map_err(|e| e.to_string())?;
    let (i0, i1) = (bessel_series(0, 1.0), bessel_series(1, 1.0));
    let closed = i0.ln() - i1 / i0;
    let s = gvm_entropy(&p).map_err(|e| e.to_string())?;
    // S = -int f log(2 pi f / sigma2) with f = e^{cos t} / (2 pi I_0)
    let quad = -integrate_circle(|t| {
        let f = t.cos().exp() / (2.0 * PI * i0);
        f * (2.0 * PI * f).ln()
    });
    check((s - quad).abs() < 1e-10 && (closed - quad).abs() < 1e-10, || {
        format!("entropy {s}, closed form {closed}, quadrature {quad}")
    })?;

    let mut worst: f64 = 0.0;
    for &(sigma2, mu, kappa) in &[(1.0, 0.0, 1.0), (2.5, 0.5, 1.0), (0.7, -2.0, 3.3)] {
        let p = GvMParams::von_mises(sigma2, mu, kappa).map_err(|e| e.to_string())?;
        let acvf = gvm_acvf(&p, 6).map_err(|e| e.to_string())?;
        for r in 1..=6u32 {
            let want = sigma2 * bessel_series(r, kappa) / bessel_series(0, kappa)
                * Complex64::from_polar(1.0, r as f64 * mu);
            let err = (acvf.lag(r as isize) - want).norm();
            worst = worst.max(err);
            check(err < 1e-10, || format!("psi({r}) of vM({sigma2}, {mu}, {kappa}) off by {err:e}"))?;
        }
    }
    Ok(format!("entropy gap {:.2e}, max acvf error {worst:.2e}", (s - quad).abs()))
}

struct RoundTrip {
    truth: GvMParams,
    fit: FitReport,
}

fn round_trips() -> Result<Vec<RoundTrip>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = SolverConfig::default();
    let mut out = Vec::new();
    for i in 0..50 {
        let sigma2 = rng.random_range(0.2..5.0);
        let mu1 = rng.random_range(-PI..PI);
        let truth = if i % 2 == 0 {
            GvMParams::von_mises(sigma2, mu1, rng.random_range(0.05..=4.0))
        } else {
            let delta = if rng.random_bool(0.5) { 0.0 } else { PI / 2.0 };
            let shape = GvMShape::new(
                vec![delta],
                vec![rng.random_range(0.05..=4.0), rng.random_range(0.05..=4.0)],
            )
            .map_err(|e| e.to_string())?;
            GvMParams::from_shape(sigma2, mu1, &shape)
        }
        .map_err(|e| e.to_string())?;
        let k = truth.order();
        let target = gvm_acvf(&truth, k).map_err(|e| e.to_string())?;
        let fit = solve_moments(&target, k, None, &cfg).map_err(|e| format!("model {i}: {e}"))?;
        out.push(RoundTrip { truth, fit });
    }
    Ok(out)
}

fn criterion_3(runs: &[RoundTrip]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, RoundTrip { truth, fit }) in runs.iter().enumerate() {
        check(fit.converged, || format!("model {i} did not converge"))?;
        let p = &fit.params;
        let mut gaps = vec![(p.sigma2() - truth.sigma2()).abs()];
        for j in 0..truth.order() {
            let period = 2.0 * PI / (j + 1) as f64;
            gaps.push(angle_gap(p.mus()[j], truth.mus()[j], period));
            gaps.push((p.kappas()[j] - truth.kappas()[j]).abs());
        }
        let gap = gaps.into_iter().fold(0.0, f64::max);
        worst = worst.max(gap);
        check(gap < 1e-6, || format!("model {i}: {truth:?} fitted as {p:?}"))?;
    }
    Ok(format!("50/50 converged, max parameter error {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SolverConfig::default();
    let mut margin = f64::INFINITY;
    for i in 0..10 {
        let vm = GvMParams::von_mises(1.0, rng.random_range(-PI..PI), rng.random_range(0.2..3.0))
            .map_err(|e| e.to_string())?;
        let s_vm = gvm_entropy(&vm).map_err(|e| e.to_string())?;
        let base = gvm_acvf(&vm, 2).map_err(|e| e.to_string())?;
        let mut accepted = 0;
        while accepted < 5 {
            let bump = Complex64::from_polar(rng.random_range(0.02..0.25), rng.random_range(-PI..PI));
            let psi2 = base.lag(2) + bump;
            let Ok(target) = Acvf::new(1.0, vec![base.lag(1), psi2]) else {
                continue;
            };
            // keep a margin from the boundary of the admissible set
            if target.toeplitz_min_eigenvalue() < 1e-3 {
                continue;
            }
            accepted += 1;
            let fit = solve_moments(&target, 2, None, &cfg).map_err(|e| format!("model {i}: {e}"))?;
            check(fit.converged, || format!("model {i}: matched GvM_2 fit did not converge"))?;
            let s = gvm_entropy(&fit.params).map_err(|e| e.to_string())?;
            margin = margin.min(s_vm - s);
            check(s <= s_vm + 1e-9, || {
                format!("model {i}: GvM_2 entropy {s} exceeds von Mises entropy {s_vm}")
            })?;
        }
    }
    Ok(format!("50 matched GvM_2 spectra, smallest entropy deficit {margin:.3e}"))
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Result<TabulatedDensity, String> {
    TabulatedDensity::new((0..n).map(|_| rng.random_range(0.05..2.0)).collect())
        .map_err(|e| e.to_string())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &mass in &[0.3, 1.0, 7.5] {
        let u = TabulatedDensity::uniform(256, mass).map_err(|e| e.to_string())?;
        let s = spectral_entropy(&u).map_err(|e| e.to_string())?;
        check(s.abs() < 1e-12, || format!("uniform entropy {s}"))?;
    }
    let mut min_info = f64::INFINITY;
    let mut max_entropy = f64::NEG_INFINITY;
    let mut max_self: f64 = 0.0;
    for i in 0..100 {
        let n = 2 * rng.random_range(8..=256);
        let f = random_table(&mut rng, n)?;
        // half the pairs are small perturbations of each other
        let spread = if i % 2 == 0 { 1.0 } else { 10f64.powf(rng.random_range(-6.0..-1.0)) };
        let g = TabulatedDensity::new(
            f.values()
                .iter()
                .map(|v| v * (1.0 + spread * rng.random_range(-0.9..0.9)))
                .collect(),
        )
        .and_then(|g| g.scaled_to(f.mass()))
        .map_err(|e| e.to_string())?;
        let s = spectral_entropy(&f).map_err(|e| e.to_string())?;
        max_entropy = max_entropy.max(s);
        check(s < 0.0, || format!("pair {i}: non-uniform table has entropy {s}"))?;
        let info = kl_information(&f, &g).map_err(|e| e.to_string())?;
        min_info = min_info.min(info);
        check(info >= -1e-12, || format!("pair {i}: I(f|g) = {info}"))?;
        let own = kl_information(&f, &f).map_err(|e| e.to_string())?;
        max_self = max_self.max(own.abs());
        check(own.abs() < 1e-12, || format!("pair {i}: I(f|f) = {own}"))?;
    }
    Ok(format!(
        "max S = {max_entropy:.3e} < 0, min I(f|g) = {min_info:.3e}, max |I(f|f)| = {max_self:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let models = [
        GvMParams::von_mises(1.7, 0.4, 2.0),
        GvMParams::new(1.0, vec![2.0, 0.3], vec![2.0, 1.5]),
        GvMParams::new(2.5, vec![-1.0, 0.5, 0.2], vec![1.0, 0.8, 0.6]),
        GvMParams::new(0.4, vec![PI, -0.2], vec![4.0, 3.0]),
        GvMParams::uniform(3.0, 2),
    ];
    let mut worst: f64 = 0.0;
    for p in models {
        let p = p.map_err(|e| e.to_string())?;
        let cdf = GvMCdf::new(&p).map_err(|e| e.to_string())?;
        let sigma2 = p.sigma2();
        let lo = cdf.eval(-PI).map_err(|e| e.to_string())?;
        let hi = cdf.eval(PI).map_err(|e| e.to_string())?;
        check(lo.abs() < 1e-9 && (hi - sigma2).abs() < 1e-9, || {
            format!("{p:?}: F(-pi) = {lo}, F(pi) = {hi}")
        })?;
        let mut prev = lo;
        for i in 1..=1024 {
            let v = cdf.eval(-PI + 2.0 * PI * i as f64 / 1024.0).map_err(|e| e.to_string())?;
            check(v >= prev, || format!("{p:?}: F decreases at grid point {i}"))?;
            prev = v;
        }
        let deltas = p.deltas();
        let mu1 = p.mus()[0];
        let norm = integrate_circle(|t| gvm_kernel(&deltas, p.kappas(), t));
        let density = |theta: f64| sigma2 * gvm_kernel(&deltas, p.kappas(), theta - mu1) / norm;
        for i in 0..64 {
            let theta = -PI + 2.0 * PI * (i as f64 + 0.37) / 64.0;
            let want = simpson(density, -PI, theta, 20_000);
            let got = cdf.eval(theta).map_err(|e| e.to_string())?;
            worst = worst.max((got - want).abs());
            check((got - want).abs() < 1e-8, || {
                format!("{p:?}: F({theta}) = {got}, quadrature {want}")
            })?;
        }
    }
    Ok(format!("5 models, endpoints exact, monotone, max series error {worst:.2e}"))
}

fn criterion_7(runs: &[RoundTrip]) -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=4usize {
        let white = Acvf::new(1.0, vec![Complex64::new(0.0, 0.0); k]).map_err(|e| e.to_string())?;
        let t = temporal_entropy(&build_sigma(&white).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let want = (k + 1) as f64 * (1.0 + (2.0 * PI).ln() - 2f64.ln());
        worst = worst.max((t - want).abs());
        check((t - want).abs() < 1e-12, || format!("k = {k}: {t} vs {want}"))?;
    }
    let mut min_eig = f64::INFINITY;
    for (i, run) in runs.iter().enumerate() {
        let p = &run.fit.params;
        let acvf = gvm_acvf(p, p.order()).map_err(|e| e.to_string())?;
        let model = build_sigma(&acvf).map_err(|e| format!("fit {i}: {e}"))?;
        let eig = model.min_eigenvalue() / p.sigma2();
        min_eig = min_eig.min(eig);
        check(eig >= -1e-10, || format!("fit {i}: Sigma has eigenvalue {eig}"))?;
    }
    Ok(format!(
        "white noise k = 1..4 within {worst:.1e}; {} fitted Sigma(k) PSD, min eigenvalue / sigma2 = {min_eig:.3e}",
        runs.len()
    ))
}

/// z-scores of the sample statistics of one simulated path against their
/// Gaussian standard errors.
fn simulation_scores(p: &GvMParams, x: &ComplexSeries) -> Result<Vec<(String, f64)>, String> {
    let n = x.len() as f64;
    let width = 400;
    let model = gvm_acvf(p, width + 8).map_err(|e| e.to_string())?;
    let psi = |h: isize| model.lag(h);
    let sample = sample_acvf(x, 5).map_err(|e| e.to_string())?;
    let mut scores = Vec::new();
    for r in 0..=5isize {
        // E|d|^2 = n^-1 sum_h |psi(h)|^2, E d^2 = n^-1 sum_h psi(h + r) psi(r - h)
        let mut abs2 = 0.0;
        let mut sq = Complex64::new(0.0, 0.0);
        for h in -(width as isize)..=(width as isize) {
            abs2 += psi(h).norm_sqr();
            sq += psi(h + r) * psi(r - h);
        }
        let (abs2, sq) = (abs2 / n, sq / n);
        let d = sample.lag(r) - psi(r);
        let var_re = 0.5 * (abs2 + sq.re);
        scores.push((format!("Re psi({r})"), d.re / var_re.sqrt()));
        if r > 0 {
            let var_im = 0.5 * (abs2 - sq.re);
            scores.push((format!("Im psi({r})"), d.im / var_im.sqrt()));
        }
    }
    // lag-1 pseudo-covariance n^-1 sum X_{j+1} X_j, E|c|^2 = n^-1 sum_h psi(h)^2 + psi(h+1) psi(h-1)
    let v = x.values();
    let pseudo: Complex64 = v.windows(2).map(|w| w[1] * w[0]).sum::<Complex64>() / n;
    let mut e2 = Complex64::new(0.0, 0.0);
    for h in -(width as isize)..=(width as isize) {
        e2 += psi(h) * psi(h) + psi(h + 1) * psi(h - 1);
    }
    let se = (0.5 * e2.re / n).sqrt();
    scores.push(("Re pseudo(1)".into(), pseudo.re / se));
    scores.push(("Im pseudo(1)".into(), pseudo.im / se));
    // Var(U_t) = Var(V_t) = sigma2 / 2; the sample mean square has variance 2 n^-1 sum_h (nu_h / 2)^2
    let mean = x.mean();
    let (mut su, mut sv) = (0.0, 0.0);
    for z in v {
        su += (z.re - mean.re).powi(2);
        sv += (z.im - mean.im).powi(2);
    }
    let mut quad = 0.0;
    for h in -(width as isize)..=(width as isize) {
        quad += 0.5 * psi(h).re.powi(2);
    }
    let se = (quad / n).sqrt();
    scores.push(("Var Re X".into(), (su / n - p.sigma2() / 2.0) / se));
    scores.push(("Var Im X".into(), (sv / n - p.sigma2() / 2.0) / se));
    Ok(scores)
}

fn criterion_8() -> Outcome {
    let vm = GvMParams::von_mises(1.0, 0.5, 1.0).map_err(|e| e.to_string())?;
    let shape = GvMShape::new(vec![0.0], vec![0.8, 0.6]).map_err(|e| e.to_string())?;
    let gvm2 = GvMParams::from_shape(1.0, -0.8, &shape).map_err(|e| e.to_string())?;
    let cases = [
        ("vM exact", &vm, SimMethod::ExactCholesky, 2_024_001u64),
        ("vM spectral", &vm, SimMethod::Spectral, 2_024_002),
        ("GvM_2 exact", &gvm2, SimMethod::ExactCholesky, 2_024_003),
        ("GvM_2 spectral", &gvm2, SimMethod::Spectral, 2_024_004),
    ];
    let mut worst: f64 = 0.0;
    let mut timings = Vec::new();
    for (name, p, method, seed) in cases {
        let start = Instant::now();
        let x = simulate(p, &SimConfig::new(20_000, seed).with_method(method))
            .map_err(|e| format!("{name}: {e}"))?;
        timings.push(format!("{name} {:.1}s", start.elapsed().as_secs_f64()));
        for (stat, z) in simulation_scores(p, &x)? {
            worst = worst.max(z.abs());
            check(z.abs() <= 3.0, || format!("{name} (seed {seed}): {stat} is {z:.2} SE off"))?;
        }
    }
    Ok(format!("n = 20000, max |z| = {worst:.2} ({})", timings.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = rng.random_range(8..=512usize);
        let phi = Complex64::from_polar(rng.random_range(0.0..0.9), rng.random_range(-PI..PI));
        let offset = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let mut prev = Complex64::new(0.0, 0.0);
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let e = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            prev = phi * prev + e;
            values.push(prev + offset);
        }
        let x = ComplexSeries::new(values).map_err(|e| e.to_string())?;
        let acvf = sample_acvf(&x, n - 1).map_err(|e| e.to_string())?;
        let psi0 = acvf.sigma2();
        let points = periodogram(&x);
        check(points.len() == n, || format!("series {i}: {} ordinates for n = {n}", points.len()))?;

        let parseval = points.iter().map(|p| p.value).sum::<f64>() / n as f64;
        worst = worst.max((parseval - psi0).abs());
        check((parseval - psi0).abs() < 1e-9, || {
            format!("series {i}: Parseval sum {parseval} vs psi(0) {psi0}")
        })?;
        for p in &points {
            check(p.value >= -1e-10 * n as f64 * psi0, || {
                format!("series {i}: negative ordinate {} at {}", p.value, p.freq)
            })?;
        }
        // the Fourier grid returns the circular autocovariance
        let folded = acvf_from_periodogram(&points, n - 1);
        for r in 0..n {
            let want = if r == 0 {
                Complex64::new(psi0, 0.0)
            } else {
                acvf.lag(r as isize) + acvf.lag(r as isize - n as isize)
            };
            worst = worst.max((folded[r] - want).norm());
            check((folded[r] - want).norm() < 1e-9, || format!("series {i}: folded lag {r}"))?;
        }
        // a grid of 2n - 1 or more points returns psi_hat itself
        let fine = periodogram_on_grid(&x, 2 * n).map_err(|e| e.to_string())?;
        let recovered = acvf_from_periodogram(&fine, n - 1);
        for r in 0..n {
            let err = (recovered[r] - acvf.lag(r as isize)).norm();
            worst = worst.max(err);
            check(err < 1e-9, || format!("series {i}: lag {r} recovered with error {err:e}"))?;
        }
    }
    Ok(format!("20 series, n in 8..512, max error {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: u32, title: &str, outcome: Outcome, elapsed: f64| {
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {title}: {detail} [{elapsed:.1}s]"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} FAIL  {title}: {detail} [{elapsed:.1}s]");
            }
        }
    };
    let timed = |f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let out = f();
        (out, start.elapsed().as_secs_f64())
    };

    let (o, t) = timed(&criterion_1);
    report(1, "Bessel series vs quadrature", o, t);
    let (o, t) = timed(&criterion_2);
    report(2, "von Mises closed forms", o, t);

    let start = Instant::now();
    let runs = round_trips();
    let round_trip_time = start.elapsed().as_secs_f64();
    let (o3, o7) = match &runs {
        Ok(runs) => (criterion_3(runs), Some(runs)),
        Err(e) => (Err(e.clone()), None),
    };
    report(3, "round-trip estimation", o3, round_trip_time);

    let (o, t) = timed(&criterion_4);
    report(4, "maximum-entropy dominance", o, t);
    let (o, t) = timed(&criterion_5);
    report(5, "Gibbs / Kullback-Leibler", o, t);
    let (o, t) = timed(&criterion_6);
    report(6, "distribution function", o, t);

    let start = Instant::now();
    let o = match o7 {
        Some(runs) => criterion_7(runs),
        None => Err("no fitted models from criterion 3".into()),
    };
    report(7, "temporal entropy", o, start.elapsed().as_secs_f64());

    let (o, t) = timed(&criterion_8);
    report(8, "simulation fidelity", o, t);
    let (o, t) = timed(&criterion_9);
    report(9, "periodogram", o, t);

    if failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 9 criteria failed");
        ExitCode::FAILURE
    }
}

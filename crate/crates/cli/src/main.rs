//! `gvm`: command-line front end for GvM_k spectral analysis.
//!
//! Angles are radians in `(-pi, pi]`. Parameters are JSON files
//! `{"k", "sigma2", "mus", "kappas"}`; series are CSV files with header `re,im`.

mod io;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use gvm_core::{
    build_sigma, burg_entropy, gvm_acvf, gvm_entropy, kl_information, periodogram, sample_acvf,
    simulate, solve_moments, temporal_entropy, Acvf, GvMCdf, GvMDensity, GvmError, SimConfig,
    SimMethod, SolverConfig,
};
use serde::Serialize;

use io::{read_params, read_series, write_csv, write_json, ParamsFile, ParseError};

const DEFAULT_GRID: usize = 4096;

#[derive(Parser)]
#[command(name = "gvm", version, about = "Maximum-entropy spectral analysis with generalized von Mises spectra")]
#[command(after_help = "Angles are in radians on (-pi, pi]. The GVM_TOL environment variable overrides the moment-solver residual tolerance.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Spectral,
}

#[derive(Subcommand)]
enum Command {
    /// Density and distribution function on N + 1 equispaced angles from -pi to pi (CSV theta,density,cdf)
    Spectrum {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral distribution function F(theta) at the given angles (CSV theta,cdf)
    CdfAt {
        #[arg(long)]
        params: PathBuf,
        #[arg(required = true, allow_negative_numbers = true)]
        angles: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Autocovariances psi(0..L) of a model (--params) or a series (--input) (CSV lag,re,im)
    Acvf {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        params: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        max_lag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a GvM_k spectrum to a series by the trigonometric method of moments (JSON)
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a Gaussian series with the given spectrum (CSV re,im)
    Simulate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        /// Cells of the spectral method (default max(4096, 2 * next power of two of length))
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral, Burg and temporal entropies of a model (JSON)
    Entropy {
        #[arg(long)]
        params: PathBuf,
        /// Grid used for the Burg entropy
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kullback-Leibler information I(f | g) of two models of equal variance (JSON)
    Kl {
        /// Model f
        #[arg(long)]
        params: PathBuf,
        /// Model g
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Periodogram at the Fourier frequencies (CSV freq,value)
    Periodogram {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy of k + 1 consecutive observations of a model (--params) or a series (--input) (JSON)
    TemporalEntropy {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        params: Option<PathBuf>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of lags k (defaults to the model order)
        #[arg(long, required_unless_present = "params")]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct AcvfJson {
    sigma2: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl From<&Acvf> for AcvfJson {
    fn from(a: &Acvf) -> Self {
        AcvfJson {
            sigma2: a.sigma2(),
            re: a.values().iter().map(|z| z.re).collect(),
            im: a.values().iter().map(|z| z.im).collect(),
        }
    }
}

#[derive(Serialize)]
struct EstimateJson {
    params: ParamsFile,
    residual_norm: f64,
    iterations: usize,
    converged: bool,
    acvf: AcvfJson,
}

#[derive(Serialize)]
struct EntropyJson {
    spectral_entropy: f64,
    burg_entropy: f64,
    temporal_entropy: f64,
}

fn solver_config() -> Result<SolverConfig> {
    let mut cfg = SolverConfig::default();
    if let Ok(tol) = std::env::var("GVM_TOL") {
        cfg.residual_tol = tol
            .trim()
            .parse()
            .map_err(|_| ParseError(format!("GVM_TOL = {tol:?} is not a number")))?;
    }
    Ok(cfg)
}

fn acvf_rows(a: &Acvf) -> impl Iterator<Item = Vec<f64>> + '_ {
    (0..=a.max_lag()).map(|r| {
        let z = a.lag(r as isize);
        vec![r as f64, z.re, z.im]
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectrum { params, grid, out } => {
            if grid < 2 {
                return Err(GvmError::InvalidParameter(format!("grid {grid} must be at least 2")).into());
            }
            let p = read_params(&params)?;
            let density = GvMDensity::new(&p)?;
            let cdf = GvMCdf::new(&p)?;
            let rows = (0..=grid)
                .map(|i| {
                    let theta = if i == grid { PI } else { -PI + 2.0 * PI * i as f64 / grid as f64 };
                    Ok(vec![theta, density.eval(theta), cdf.eval(theta)?])
                })
                .collect::<gvm_core::Result<Vec<_>>>()?;
            write_csv(out.as_ref(), "theta,density,cdf", rows.into_iter())
        }
        Command::CdfAt { params, angles, out } => {
            let cdf = GvMCdf::new(&read_params(&params)?)?;
            let rows = angles
                .iter()
                .map(|&t| Ok(vec![t, cdf.eval(t)?]))
                .collect::<gvm_core::Result<Vec<_>>>()?;
            write_csv(out.as_ref(), "theta,cdf", rows.into_iter())
        }
        Command::Acvf { params, input, max_lag, out } => {
            let acvf = match (params, input) {
                (Some(p), _) => gvm_acvf(&read_params(&p)?, max_lag)?,
                (None, Some(i)) => sample_acvf(&read_series(&i)?, max_lag)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            write_csv(out.as_ref(), "lag,re,im", acvf_rows(&acvf))
        }
        Command::Estimate { input, order, out } => {
            let x = read_series(&input)?;
            let acvf = sample_acvf(&x, order)?;
            let fit = solve_moments(&acvf, order, None, &solver_config()?)?;
            write_json(
                out.as_ref(),
                &EstimateJson {
                    params: ParamsFile::from_params(&fit.params),
                    residual_norm: fit.residual_norm,
                    iterations: fit.iterations,
                    converged: fit.converged,
                    acvf: (&acvf).into(),
                },
            )
        }
        Command::Simulate { params, length, seed, method, grid, out } => {
            let p = read_params(&params)?;
            let cfg = SimConfig {
                method: match method {
                    Method::Exact => SimMethod::ExactCholesky,
                    Method::Spectral => SimMethod::Spectral,
                },
                spectral_nodes: grid,
                ..SimConfig::new(length, seed)
            };
            let x = simulate(&p, &cfg)?;
            write_csv(out.as_ref(), "re,im", x.values().iter().map(|z| vec![z.re, z.im]))
        }
        Command::Entropy { params, grid, out } => {
            let p = read_params(&params)?;
            let table = GvMDensity::new(&p)?.tabulate(grid)?;
            let model = build_sigma(&gvm_acvf(&p, p.order())?)?;
            write_json(
                out.as_ref(),
                &EntropyJson {
                    spectral_entropy: gvm_entropy(&p)?,
                    burg_entropy: burg_entropy(&table)?,
                    temporal_entropy: temporal_entropy(&model)?,
                },
            )
        }
        Command::Kl { params, reference, grid, out } => {
            let f = GvMDensity::new(&read_params(&params)?)?.tabulate(grid)?;
            let g = GvMDensity::new(&read_params(&reference)?)?.tabulate(grid)?;
            let value = kl_information(&f, &g)?;
            write_json(out.as_ref(), &serde_json::json!({ "kl_information": value }))
        }
        Command::Periodogram { input, out } => {
            let x = read_series(&input)?;
            let points = periodogram(&x);
            write_csv(out.as_ref(), "freq,value", points.iter().map(|p| vec![p.freq, p.value]))
        }
        Command::TemporalEntropy { params, input, order, out } => {
            let acvf = match (params, input) {
                (Some(path), _) => {
                    let p = read_params(&path)?;
                    gvm_acvf(&p, order.unwrap_or(p.order()))?
                }
                (None, Some(path)) => {
                    let k = order.context("--order is required with --input")?;
                    sample_acvf(&read_series(&path)?, k)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let value = temporal_entropy(&build_sigma(&acvf)?)?;
            write_json(
                out.as_ref(),
                &serde_json::json!({ "order": acvf.max_lag(), "temporal_entropy": value }),
            )
        }
    }
}

/// 2 bad input, 3 out of range, 4 infeasible, 5 no convergence,
/// 6 numerical failure, 1 anything else (I/O).
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ParseError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<GvmError>() {
        Some(GvmError::InvalidParameter(_)) => 2,
        Some(GvmError::Range(_)) => 3,
        Some(GvmError::Infeasible(_)) | Some(GvmError::NotPositiveDefinite(_)) => 4,
        Some(GvmError::NoConvergence { .. }) => 5,
        Some(_) => 6,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

//! Maximum-entropy spectral analysis of stationary complex-valued time series
//! with the generalized von Mises spectral model of order `k` (GvM_k).
//!
//! A GvM_k spectral density of total mass `sigma2` is
//!
//! ```text
//! f(theta) = sigma2 * exp{ sum_j kappa_j cos j(theta - mu_j) } / (2 pi G_0)
//! ```
//!
//! on `(-pi, pi]`. It is the spectral density of largest Shannon entropy among
//! all spectra matching the first `k` autocovariances of a series, and more
//! generally the exponential tilt closest in Kullback-Leibler information to
//! any reference spectrum.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: modified Bessel functions, periodic quadrature and the
//!   trigonometric integral constants `G_r`, `H_r`, `A_r`, `B_r`.
//! * [`spectrum`]: the spectral model itself (density, distribution function,
//!   entropies, Kullback-Leibler information, exponential tilts and the map to
//!   autocovariances).
//! * [`estimation`]: sample autocovariances, the periodogram, Burg entropy and
//!   the trigonometric method of moments.
//! * [`gaussian`]: real-coordinate covariances, temporal entropy and
//!   simulation of radially symmetric Gaussian paths.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimation;
pub mod gaussian;
pub mod special;
pub mod spectrum;

pub use error::{GvmError, Result};
pub use estimation::{
    burg_entropy, periodogram, sample_acvf, solve_moments, solve_vm, ComplexSeries, FitReport,
    PeriodogramPoint, SolverConfig,
};
pub use gaussian::{
    build_sigma, simulate, temporal_entropy, GaussianModel, SimConfig, SimMethod,
};
pub use special::{
    ab_ratios, bessel_i, g_const, h_const, quad_periodic, GvMShape, QuadratureSpec, Reference,
};
pub use spectrum::{
    exponential_tilt, gvm_acvf, gvm_cdf, gvm_density, gvm_entropy, kl_bound, kl_information,
    spectral_entropy, spectral_increment_variance, Acvf, GvMCdf, GvMDensity, GvMParams,
    TabulatedDensity,
};

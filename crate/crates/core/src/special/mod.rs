//! Special functions and the integral constants shared by every other module.

mod bessel;
mod constants;
mod quadrature;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_i_scaled_seq, bessel_ratio_10, BESSEL_OVERFLOW_LIMIT,
};
pub use constants::{
    ab_ratios, g_const, h_const, trig_ratios, trig_ratios_until_negligible, GvMShape, Reference,
    TrigRatios,
};
pub use quadrature::{quad_periodic, QuadratureSpec, MAX_NODES};

//! Special functions used by the windows, transforms and bounds.
//!
//! Everything here is implemented from scratch on top of `f64` so the
//! closed-form and quadrature routes share no third-party numerics.

mod bessel;
mod bspline;
mod erf;
mod quad;

pub use bessel::{bessel_i1, bessel_i1_scaled, bessel_j1, j1_over_sqrt};
pub(crate) use bspline::centered_bspline;
pub use bspline::{cardinal_bspline, eulerian_number, m2s_at_zero, m2s_at_zero_f64};
pub use erf::{erf, erfc};
pub use quad::{integrate, QuadResult, Quadrature};

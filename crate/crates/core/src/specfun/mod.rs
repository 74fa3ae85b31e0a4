//! Special functions and quadrature engines.

mod bessel;
pub(crate) mod quadrature;
mod theta;

pub use bessel::{bessel_i0, bessel_i0_scaled, SERIES_ASYMPTOTIC_SEAM};
pub(crate) use bessel::i0_scaled_unchecked;
pub use quadrature::{integrate_finite, integrate_semi_infinite, IntegrationResult, QuadratureSpec, SemiInfiniteResult};
pub(crate) use quadrature::{partition, try_integrate_pieces, try_integrate_semi_infinite};
pub use theta::theta3;

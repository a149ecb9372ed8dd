//! Shared numerics: double-double helpers, smooth test functions,
//! oscillation-aware quadrature and Bessel kernels.

pub mod bessel;
pub mod bump;
pub mod dd;
pub mod quad;

pub use bessel::{bessel_j, bessel_k0, bessel_y0};
pub use bump::{BumpShape, SmoothBump};
pub use quad::{integrate, integrate_real, integrate_with_budget, QuadratureResult};

//! Desk-scale numerical laboratory for the constructive ingredients of
//! t-aspect subconvexity for GL(2) x GL(2) convolutions: exact
//! multiplicative arithmetic, the DFI delta symbol with conductor lowering,
//! Voronoi and Poisson summation, oscillatory-integral certificates, and
//! Rankin-Selberg L-value growth measurement.

pub mod arith;
pub mod delta;
pub mod error;
pub mod lfunc;
pub mod num;
pub mod oscillatory;
pub mod summation;

pub use arith::{CuspFormData, MultiplicativeSequence};
pub use delta::{ConductorKernel, DeltaScheme};
pub use num::{QuadratureResult, SmoothBump};

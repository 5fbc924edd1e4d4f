//! Numerical kernels: finite differences, interpolation, quadrature,
//! arc-length reparametrization, ODE integration and constancy tests.

pub mod arclength;
pub mod constancy;
pub mod grid;
pub mod interp;
pub mod jet;
pub mod ode;
pub mod stencil;

pub use arclength::{arc_length_reparam, ArcLengthSamples, ParametricCurve};
pub use constancy::{is_constant, ConstancyVerdict};
pub use grid::{SampledScalar, SampledVecField, UniformGrid, MIN_GRID, TRIM_MARGIN};
pub use interp::interpolate;
pub use jet::Jet;
pub use ode::integrate_frenet;
pub use stencil::{derive, derive_vec};

//! Differential geometry of ruled surfaces in Euclidean 3-space.
//!
//! A ruled surface `r(u, v) = f(u) + v q(u)` is described by a
//! [`RuledSurfaceSpec`]. From it the crate computes the striction curve, the
//! surface's Frenet frame `{q, h, a}` along the arc-length parametrized
//! striction line with its invariants `k1`, `k2`, and classifies the surface
//! as developable, conoidal, q-slant, h-slant or a-slant. Surfaces can also
//! be synthesized from prescribed curvatures, offset in the Bertrand and
//! Mannheim senses, and exported as meshes.
//!
//! ```
//! use ruledgeo::{classify, workbench, Tolerances};
//!
//! let spec = workbench::builtin("example-6-2").unwrap();
//! let report = classify(&spec, &Tolerances::default()).unwrap();
//! assert!(report.h_slant.is_yes());
//! assert!((report.sigma.mean().unwrap() + 8.0 / 15.0).abs() < 1e-3);
//! ```

// `!(x > y)` comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod frenet;
pub mod numkit;
pub mod offsets;
pub mod slant;
pub mod surface;
pub mod workbench;
/// A point or vector in E³.
pub type Vec3 = nalgebra::Vector3<f64>;

pub use error::{Error, Result};
pub use expr::Expr;
pub use frenet::{ruled_apparatus, StrictionFrameField};
pub use numkit::UniformGrid;
pub use slant::{classify, classify_field, ClassificationReport, Tolerances};
pub use surface::RuledSurfaceSpec;

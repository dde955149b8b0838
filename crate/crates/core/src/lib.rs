//! Riesz and logarithmic equilibrium measures on the unit sphere `S^d`
//! under external fields generated by charges on the positive polar axis.
//!
//! Every field handled here is rotationally invariant about the polar axis,
//! so points of the sphere are described by their height `u ∈ [-1, 1]` and
//! measures by a radial density against the normalized surface measure `σ_d`,
//! optionally with a uniform charge on the boundary ring of a cap.
//!
//! The numerical layer is generic over the scalar type through [`Real`];
//! `f64` aliases are exported at the crate root for everyday use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axis_field;
pub mod cap_exceptional;
pub mod cap_riesz;
mod error;
pub mod measure;
pub mod oracle;
pub mod point_field;
pub mod quadrature;
mod scalar;
pub mod specfun;
pub mod sphere;

pub use error::{Error, Result};
pub use scalar::Real;

pub use axis_field::{AxisCapSolution, AxisMeasure};
pub use cap_riesz::{CapSolution, SolvedBy};
pub use measure::SignedCapMeasure;
pub use point_field::{PointCharge, SphereSignedDensity};
pub use sphere::{Kernel, Params, RadialQuadrature};

/// Sphere dimension and kernel in double precision.
pub type Params64 = Params<f64>;
/// Kernel choice in double precision.
pub type Kernel64 = Kernel<f64>;
/// A point charge above the North Pole in double precision.
pub type PointCharge64 = PointCharge<f64>;
/// A finite atomic measure on the positive polar axis in double precision.
pub type AxisMeasure64 = AxisMeasure<f64>;
/// Radial (plus boundary-ring) measure on a cap in double precision.
pub type SignedCapMeasure64 = SignedCapMeasure<f64>;
/// Extremal support solution in double precision.
pub type CapSolution64 = CapSolution<f64>;
/// Axis-field support solution in double precision.
pub type AxisCapSolution64 = AxisCapSolution<f64>;
/// Full-sphere signed equilibrium in double precision.
pub type SphereSignedDensity64 = SphereSignedDensity<f64>;
/// Radial quadrature rule in double precision.
pub type RadialQuadrature64 = RadialQuadrature<f64>;

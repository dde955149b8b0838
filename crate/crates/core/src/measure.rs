//! Rotationally invariant measures supported on a cap `Σ_t`.

use std::fmt;
use std::sync::Arc;

use crate::sphere::{integrate_radial, Params};
use crate::{Real, Result};

type Density<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// A measure on `Σ_t = {u <= t}`: a radial density against `σ_d` plus a uniform
/// charge on the boundary ring `u = t`.
///
/// `boundary_coeff` is the mass carried by the ring, i.e. the coefficient of the
/// normalized ring measure `σ_{d-1}` placed at height `t`.
#[derive(Clone)]
pub struct SignedCapMeasure<T> {
    pub params: Params<T>,
    pub t: T,
    pub boundary_coeff: T,
    /// Total mass, computed by quadrature when the measure is built.
    pub mass: T,
    /// Value of the functional whose stationarity selects the cap.
    pub phi: T,
    /// Constant value of the weighted potential on the cap.
    pub level: T,
    /// Exponent `p` with `density(u) ~ (t-u)^p` as `u -> t`.
    pub edge_exponent: T,
    density: Density<T>,
}

/// Alias used for caps whose measure carries a ring charge.
pub type BoundaryMeasureCap<T> = SignedCapMeasure<T>;

impl<T: Real> SignedCapMeasure<T> {
    /// Builds the measure and computes its mass by quadrature.
    pub(crate) fn new(
        params: Params<T>,
        t: T,
        boundary_coeff: T,
        phi: T,
        level: T,
        edge_exponent: T,
        density: Density<T>,
    ) -> Result<Self> {
        let mut m = SignedCapMeasure {
            params,
            t,
            boundary_coeff,
            mass: T::zero(),
            phi,
            level,
            edge_exponent,
            density,
        };
        m.mass = m.moment(0)?;
        Ok(m)
    }

    /// Radial density at height `u < t`.
    pub fn density(&self, u: T) -> T {
        (self.density)(u, self.t - u)
    }

    /// Radial density at height `u` given the exact distance `gap = t - u`.
    pub fn density_with_gap(&self, u: T, gap: T) -> T {
        (self.density)(u, gap)
    }

    /// `∫ u^k dμ`, including the ring charge.
    pub fn moment(&self, k: i32) -> Result<T> {
        let interior = integrate_radial(
            self.t,
            &self.params,
            self.edge_exponent,
            |u, g| (self.density)(u, g) * u.powi(k),
            T::lit(1e-13).max(T::lit(16.0) * T::epsilon()),
        )?;
        Ok(interior + self.boundary_coeff * self.t.powi(k))
    }

    /// Mass of the radial part alone.
    pub fn interior_mass(&self) -> Result<T> {
        Ok(self.moment(0)? - self.boundary_coeff)
    }
}

impl<T: Real> fmt::Debug for SignedCapMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignedCapMeasure")
            .field("params", &self.params)
            .field("t", &self.t)
            .field("boundary_coeff", &self.boundary_coeff)
            .field("mass", &self.mass)
            .field("phi", &self.phi)
            .field("level", &self.level)
            .finish_non_exhaustive()
    }
}

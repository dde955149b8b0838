//! External fields generated by finitely many positive charges on the positive polar axis.

use crate::cap_exceptional::{log_f0_atoms, log_solve_atoms, log_weighted_potential_atoms, solve_exceptional_atoms,
    weighted_potential_exceptional_atoms};
use crate::cap_riesz::{solve_atoms, weighted_potential_atoms, CapSolution};
use crate::point_field::{PointCharge, SphereSignedDensity};
use crate::sphere::{Kernel, Params, Regime};
use crate::{Error, Real, Result};

/// Support solution for an axis field; identical in shape to a point-charge solution.
pub type AxisCapSolution<T> = CapSolution<T>;

/// A finite positive measure `λ = Σ m_i δ_{R_i}` with every `R_i > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisMeasure<T> {
    atoms: Vec<PointCharge<T>>,
}

impl<T: Real> AxisMeasure<T> {
    /// Builds `λ` from atoms `(R_i, m_i)`.
    pub fn new(atoms: &[(T, T)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::domain("axis measure needs at least one atom"));
        }
        let mut out = Vec::with_capacity(atoms.len());
        for &(height, mass) in atoms {
            if !(mass > T::zero()) {
                return Err(Error::domain(format!("atom masses must be positive, got {mass}")));
            }
            out.push(PointCharge::new(mass, height)?);
        }
        Ok(AxisMeasure { atoms: out })
    }

    /// The measure with a single atom at the charge location.
    pub fn single(charge: &PointCharge<T>) -> Result<Self> {
        Self::new(&[(charge.height, charge.q)])
    }

    /// Builds `λ` from atoms that may lie inside the sphere (`0 < R < 1`).
    ///
    /// An atom at `R < 1` produces on the sphere the field of an atom at `1/R`
    /// with mass `m R^{-s}`; for the logarithmic kernel the mass is unchanged and
    /// the field shifts by the constant `m log R`, which is returned alongside.
    pub fn from_heights(atoms: &[(T, T)], params: &Params<T>) -> Result<(Self, T)> {
        let one = T::one();
        let mut shift = T::zero();
        let mut mapped = Vec::with_capacity(atoms.len());
        for &(height, mass) in atoms {
            if !(height > T::zero()) || height == one {
                return Err(Error::domain(format!("atom height must be positive and not 1, got {height}")));
            }
            if height > one {
                mapped.push((height, mass));
                continue;
            }
            match params.kernel {
                Kernel::Riesz(s) => mapped.push((one / height, mass * height.powf(-s))),
                Kernel::Log => {
                    shift = shift + mass * height.ln();
                    mapped.push((one / height, mass));
                }
            }
        }
        Ok((Self::new(&mapped)?, shift))
    }

    pub fn atoms(&self) -> &[PointCharge<T>] {
        &self.atoms
    }

    /// `‖λ‖`.
    pub fn total_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| acc + a.q)
    }

    /// `λ₁ + λ₂`.
    pub fn merged(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        AxisMeasure { atoms }
    }
}

/// Field `Q(x) = ∫ k(x, R p) dλ(R)` at a sphere point of height `ξ`.
pub fn axis_q<T: Real>(xi: T, lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<T> {
    if !(xi >= -T::one() && xi <= T::one()) {
        return Err(Error::domain(format!("height must lie in [-1, 1], got {xi}")));
    }
    Ok(field_at(xi, lambda.atoms(), params))
}

pub(crate) fn field_at<T: Real>(xi: T, atoms: &[PointCharge<T>], params: &Params<T>) -> T {
    let half = T::lit(0.5);
    atoms.iter().fold(T::zero(), |acc, a| {
        let rho2 = a.dist2(xi);
        match params.kernel {
            Kernel::Riesz(s) => acc + a.q * rho2.powf(-s * half),
            Kernel::Log => acc - a.q * half * rho2.ln(),
        }
    })
}

/// Signed equilibrium on the whole sphere; see [`SphereSignedDensity::support_margin`].
pub fn axis_sphere_equilibrium<T: Real>(lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<SphereSignedDensity<T>> {
    SphereSignedDensity::axis(lambda, params)
}

/// Support height `t_λ` and extremal measure, for every kernel regime.
pub fn axis_solve_t<T: Real>(lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<AxisCapSolution<T>> {
    solve_for_atoms(lambda.atoms(), params)
}

pub(crate) fn solve_for_atoms<T: Real>(atoms: &[PointCharge<T>], params: &Params<T>) -> Result<CapSolution<T>> {
    match params.regime()? {
        Regime::Riesz => solve_atoms(params, atoms),
        Regime::Exceptional => solve_exceptional_atoms(params, atoms),
        Regime::Log => log_solve_atoms(atoms, None),
    }
}

/// Closed-form weighted potential `U^{η_t} + Q` of the signed equilibrium of `Σ_t`.
pub fn axis_weighted_potential<T: Real>(xi: T, t: T, lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<T> {
    weighted_potential_for_atoms(xi, t, lambda.atoms(), params)
}

pub(crate) fn weighted_potential_for_atoms<T: Real>(
    xi: T,
    t: T,
    atoms: &[PointCharge<T>],
    params: &Params<T>,
) -> Result<T> {
    match params.regime()? {
        Regime::Riesz => weighted_potential_atoms(params, xi, t, atoms),
        Regime::Exceptional => weighted_potential_exceptional_atoms(params, xi, t, atoms),
        Regime::Log => log_weighted_potential_atoms(xi, t, atoms),
    }
}

/// Signed equilibrium of `Σ_t` for an axis field.
pub fn axis_signed_equilibrium<T: Real>(
    t: T,
    lambda: &AxisMeasure<T>,
    params: &Params<T>,
) -> Result<crate::SignedCapMeasure<T>> {
    match params.regime()? {
        Regime::Riesz => crate::cap_riesz::eta_measure_atoms(params, t, lambda.atoms()),
        Regime::Exceptional => crate::cap_exceptional::etabar_measure_atoms(params, t, lambda.atoms()),
        Regime::Log => crate::cap_exceptional::log_eta_atoms(t, lambda.atoms()),
    }
}

/// Logarithmic support functional `F̃_0(Σ_t)` on `S^2`.
pub fn axis_f0_functional<T: Real>(t: T, lambda: &AxisMeasure<T>) -> Result<T> {
    if !(t > -T::one() && t <= T::one()) {
        return Err(Error::domain(format!("cap height must lie in (-1, 1], got {t}")));
    }
    log_f0_atoms(t, lambda.atoms())
}

/// Limit of the logarithmic extremal density at the edge of `Σ_t`:
/// `Σ 2 R m (R+1)²(1-t)/r⁴` when `t` solves the support equation.
pub fn axis_log_edge_density<T: Real>(t: T, lambda: &AxisMeasure<T>) -> T {
    let one = T::one();
    lambda.atoms().iter().fold(T::zero(), |acc, a| {
        let r2 = crate::cap_riesz::r2(a.height, t);
        acc + T::lit(2.0) * a.height * a.q * (a.height + one).powi(2) * (one - t) / (r2 * r2)
    })
}

/// The support objective and residual at `t`.
///
/// Riesz: `(Φ_s(t), Δ(t))`; `s = d - 2`: `(Φ̄(t), Δ̄(t))`; logarithmic: `(F̃_0(Σ_t), 1 + ‖λ‖ - Σ m (R+1)²/r²)`.
/// In every case `t_λ` is where the residual changes sign from positive to negative.
pub fn axis_phi_delta<T: Real>(t: T, lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<(T, T)> {
    let atoms = lambda.atoms();
    match params.regime()? {
        Regime::Riesz => {
            let k = crate::cap_riesz::Consts::new(params)?;
            let phi = crate::cap_riesz::phi_atoms(&k, t, atoms)?;
            Ok((phi, phi - crate::cap_riesz::pull_atoms(&k, t, atoms)))
        }
        Regime::Exceptional => {
            let phi = crate::cap_exceptional::phibar_atoms(params, t, atoms)?;
            Ok((phi, phi - crate::cap_exceptional::pullbar_atoms(params, t, atoms)))
        }
        Regime::Log => {
            let one = T::one();
            let f0 = axis_f0_functional(t, lambda)?;
            let residual = atoms.iter().fold(one + lambda.total_mass(), |acc, a| {
                acc - a.q * (a.height + one).powi(2) / crate::cap_riesz::r2(a.height, t)
            });
            Ok((f0, residual))
        }
    }
}

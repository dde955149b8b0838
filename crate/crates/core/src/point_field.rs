//! Single point charge above the North Pole: the signed equilibrium on the
//! whole sphere, the full-support criterion and the Newtonian distance polynomial.

use crate::axis_field::AxisMeasure;
use crate::specfun::{hyp2f1_split, Norm};
use crate::sphere::{integrate_radial, sphere_energy, Kernel, Params};
use crate::{Error, Real, Result};

/// Charge `q >= 0` placed at `a = R p` with `R > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCharge<T> {
    pub q: T,
    /// Distance `R` of the charge from the centre of the sphere.
    pub height: T,
}

impl<T: Real> PointCharge<T> {
    pub fn new(q: T, height: T) -> Result<Self> {
        if !(q >= T::zero()) || !q.is_finite() {
            return Err(Error::domain(format!("charge must be non-negative, got {q}")));
        }
        if !(height > T::one()) || !height.is_finite() {
            return Err(Error::domain(format!("charge height must exceed 1, got {height}")));
        }
        Ok(PointCharge { q, height })
    }

    /// `|x - a|²` for a sphere point at height `u`.
    pub fn dist2(&self, u: T) -> T {
        let r = self.height;
        (r - T::one()).powi(2) + T::lit(2.0) * r * (T::one() - u)
    }
}

/// Potential of the uniform measure `σ_d` at an axis point of height `R > 1`.
pub(crate) fn uniform_potential_at<T: Real>(big_r: T, params: &Params<T>) -> Result<T> {
    let one = T::one();
    match params.kernel {
        Kernel::Riesz(s) => {
            let d = params.dim();
            let half = T::lit(0.5);
            let rp = big_r + one;
            let z = T::lit(4.0) * big_r / (rp * rp);
            let omz = ((big_r - one) / rp).powi(2);
            Ok(rp.powf(-s) * hyp2f1_split(s * half, d * half, d, z, omz, Norm::Plain)?)
        }
        Kernel::Log => {
            if params.d != 2 {
                return Err(Error::domain("logarithmic field potentials are implemented for d = 2"));
            }
            let lo = (big_r - one).powi(2);
            let hi = (big_r + one).powi(2);
            let lo_term = if lo > T::zero() { lo * lo.ln() } else { T::zero() };
            Ok(T::lit(0.5) + (lo_term - hi * hi.ln()) / (T::lit(8.0) * big_r))
        }
    }
}

/// `U_s^σ(a)`, the Riesz potential of `σ_d` at the charge location.
pub fn field_potential_on_axis<T: Real>(charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    match params.kernel {
        Kernel::Riesz(s) if s > T::zero() && s < params.dim() => uniform_potential_at(charge.height, params),
        _ => Err(Error::domain("field potential requires a Riesz kernel with 0 < s < d")),
    }
}

/// Signed equilibrium on the whole sphere for a field generated by axis charges.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSignedDensity<T> {
    pub params: Params<T>,
    pub atoms: Vec<PointCharge<T>>,
    /// Constant value `F` of the weighted potential on the sphere.
    pub f: T,
}

impl<T: Real> SphereSignedDensity<T> {
    pub(crate) fn from_atoms(atoms: &[PointCharge<T>], params: &Params<T>) -> Result<Self> {
        let w = sphere_energy(params)?;
        if params.is_log() && params.d != 2 {
            return Err(Error::domain("logarithmic full-sphere equilibrium requires d = 2"));
        }
        let mut f = w;
        for a in atoms {
            f = f + a.q * uniform_potential_at(a.height, params)?;
        }
        Ok(SphereSignedDensity { params: *params, atoms: atoms.to_vec(), f })
    }

    /// Equilibrium for a single point charge.
    pub fn point(charge: &PointCharge<T>, params: &Params<T>) -> Result<Self> {
        Self::from_atoms(std::slice::from_ref(charge), params)
    }

    /// Equilibrium for an axis measure.
    pub fn axis(lambda: &AxisMeasure<T>, params: &Params<T>) -> Result<Self> {
        Self::from_atoms(lambda.atoms(), params)
    }

    /// Density with respect to `σ_d` at height `u`.
    pub fn density(&self, u: T) -> T {
        let one = T::one();
        match self.params.kernel {
            Kernel::Log => {
                let total: T = self.atoms.iter().fold(T::zero(), |acc, a| acc + a.q);
                self.atoms.iter().fold(one + total, |acc, a| {
                    let r2 = a.height * a.height - one;
                    acc - a.q * r2 * r2 / a.dist2(u).powi(2)
                })
            }
            Kernel::Riesz(s) => {
                let d = self.params.dim();
                let w = sphere_energy(&self.params).expect("validated at construction");
                let pull = self.atoms.iter().fold(T::zero(), |acc, a| {
                    let r2 = a.height * a.height - one;
                    acc + a.q * r2.powf(d - s) * a.dist2(u).powf(s / T::lit(2.0) - d)
                });
                (self.f - pull) / w
            }
        }
    }

    /// Signed margin of the full-support criterion; non-negative iff the support is the whole sphere.
    pub fn support_margin(&self) -> T {
        let one = T::one();
        match self.params.kernel {
            Kernel::Log => {
                let total: T = self.atoms.iter().fold(T::zero(), |acc, a| acc + a.q);
                self.atoms.iter().fold(one + total, |acc, a| {
                    acc - a.q * ((a.height + one) / (a.height - one)).powi(2)
                })
            }
            Kernel::Riesz(s) => {
                let d = self.params.dim();
                self.atoms.iter().fold(self.f, |acc, a| {
                    acc - a.q * (a.height + one).powf(d - s) / (a.height - one).powf(d)
                })
            }
        }
    }

    /// Total mass by quadrature.
    pub fn mass(&self) -> Result<T> {
        integrate_radial(T::one(), &self.params, T::zero(), |u, _| self.density(u), T::lit(1e-12).max(T::lit(16.0) * T::epsilon()))
    }
}

/// Density of the signed equilibrium on `S^d` at height `u`.
pub fn sphere_signed_density<T: Real>(u: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    if !(u >= -T::one() && u <= T::one()) {
        return Err(Error::domain(format!("height must lie in [-1, 1], got {u}")));
    }
    Ok(SphereSignedDensity::point(charge, params)?.density(u))
}

/// `W_s(S^d)/q - [(R+1)^{d-s}/(R-1)^d - U_s^σ(a)]`; non-negative iff the extremal support is `S^d`.
pub fn full_support_margin<T: Real>(charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let Kernel::Riesz(s) = params.kernel else {
        return Err(Error::domain("full-support margin is defined for Riesz kernels"));
    };
    let w = sphere_energy(params)?;
    let u = field_potential_on_axis(charge, params)?;
    let one = T::one();
    let r = charge.height;
    let d = params.dim();
    let pull = (r + one).powf(d - s) / (r - one).powf(d) - u;
    if charge.q == T::zero() {
        return Ok(T::infinity());
    }
    Ok(w / charge.q - pull)
}

/// `P(d; ρ) = (ρ^d - 2 - ρ)(ρ + 1)^{d-1} + ρ^d`.
pub fn gonchar_polynomial<T: Real>(d: u32, rho: T) -> Result<T> {
    if d < 2 {
        return Err(Error::domain("Gonchar polynomial requires d >= 2"));
    }
    let n = d as i32;
    let two = T::lit(2.0);
    Ok((rho.powi(n) - two - rho) * (rho + T::one()).powi(n - 1) + rho.powi(n))
}

/// The unique positive root of `P(d; ρ)`, which lies in `(1, 2]`.
pub fn gonchar_root<T: Real>(d: u32) -> Result<T> {
    let mut lo = T::one();
    let mut hi = T::lit(2.0);
    let p_lo = gonchar_polynomial(d, lo)?;
    let p_hi = gonchar_polynomial(d, hi)?;
    if !(p_lo < T::zero() && p_hi >= T::zero()) {
        return Err(Error::convergence("Gonchar polynomial is not bracketed on (1, 2]"));
    }
    if p_hi == T::zero() {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if gonchar_polynomial(d, mid)? < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

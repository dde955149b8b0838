//! Caps in the regime `d - 2 < s < d`: balayage densities, their norms, the
//! functional `Φ_s(t)` and its minimizer `t₀`.
//!
//! Functions taking a single [`PointCharge`] are thin wrappers over versions
//! taking a slice of axis charges, so point and axis fields share one code path.

use std::sync::Arc;

use crate::measure::SignedCapMeasure;
use crate::point_field::{PointCharge, SphereSignedDensity};
use crate::quadrature::integrate_jacobi;
use crate::specfun::{beta_reg, gamma_ratio, hyp2f1_split, rgamma, Norm};
use crate::sphere::{sphere_energy, Params, Regime};
use crate::{Error, Real, Result};

/// How the support height was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvedBy {
    InteriorRoot,
    BoundaryTEqualsOne,
}

/// Extremal support `Σ_{t₀}` and the equilibrium measure on it.
#[derive(Debug, Clone)]
pub struct CapSolution<T: Real> {
    pub t0: T,
    /// `F(Σ_{t₀})`, the constant value of the weighted potential on the support.
    pub phi_at_t0: T,
    /// Residual of the support equation at `t₀` (zero when `t₀ = 1` is not a root).
    pub delta_at_t0: T,
    pub equilibrium: SignedCapMeasure<T>,
    pub solved_by: SolvedBy,
    pub params: Params<T>,
    /// Charges generating the external field.
    pub atoms: Vec<PointCharge<T>>,
}

impl<T: Real> CapSolution<T> {
    /// Support height, named as for axis fields.
    pub fn t_lambda(&self) -> T {
        self.t0
    }
}

pub(crate) struct Consts<T> {
    pub d: T,
    pub s: T,
    pub w: T,
    /// `1 - (d - s)/2`, third parameter of the density hypergeometric function.
    pub c: T,
    /// `Γ(d/2)/Γ(d - s/2)`.
    pub g: T,
}

impl<T: Real> Consts<T> {
    pub fn new(params: &Params<T>) -> Result<Self> {
        params.require(Regime::Riesz)?;
        let d = params.dim();
        let s = params.s();
        let half = T::lit(0.5);
        Ok(Consts {
            d,
            s,
            w: sphere_energy(params)?,
            c: T::one() - (d - s) * half,
            g: gamma_ratio(&[d * half], &[d - s * half]),
        })
    }

    /// `Γ(d/2)/Γ(d-s/2) ((1-t)/(1-u))^{d/2} ((t-u)/(1-t))^{(s-d)/2}`.
    fn prefactor(&self, u: T, gap: T, t: T) -> T {
        let one = T::one();
        let half = T::lit(0.5);
        let omt = one - t;
        self.g * omt.powf(self.d - self.s * half) * (one - u).powf(-self.d * half) * gap.powf((self.s - self.d) * half)
    }

    /// `₂F̃₁(1, d/2; c; x)` with `1 - x` supplied.
    fn reg(&self, x: T, omx: T) -> Result<T> {
        hyp2f1_split(T::one(), self.d * T::lit(0.5), self.c, x, omx, Norm::Regularized)
    }

    /// `₂F̃₁(1, d/2; c; x) - ₂F̃₁(1, d/2; c; kx)`.
    fn reg_difference(&self, x: T, omx: T, k: T) -> Result<T> {
        let one = T::one();
        if x <= T::lit(0.5) {
            let half_d = self.d * T::lit(0.5);
            let ln_k = k.ln();
            let mut term = half_d * x * rgamma(one + self.c);
            let mut sum = T::zero();
            for n in 1..100_000usize {
                let nn = T::of(n);
                let factor = -(nn * ln_k).exp_m1();
                let contrib = term * factor;
                sum = sum + contrib;
                if contrib.abs() <= T::epsilon() * sum.abs() && n > 2 {
                    return Ok(sum);
                }
                term = term * (half_d + nn) * x / (nn + self.c);
            }
            return Err(Error::convergence("density difference series did not converge"));
        }
        let kx = k * x;
        Ok(self.reg(x, omx)? - self.reg(kx, one - kx)?)
    }
}

fn check_cap_height<T: Real>(t: T) -> Result<()> {
    if t > -T::one() && t <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("cap height must lie in (-1, 1], got {t}")))
    }
}

fn check_inside<T: Real>(u: T, t: T) -> Result<()> {
    if u >= -T::one() && u < t {
        Ok(())
    } else {
        Err(Error::domain(format!("height u={u} must satisfy -1 <= u < t={t}")))
    }
}

/// `r² = R² - 2Rt + 1`.
pub(crate) fn r2<T: Real>(big_r: T, t: T) -> T {
    (big_r - T::one()).powi(2) + T::lit(2.0) * big_r * (T::one() - t)
}

/// Density of `ν_t = bal_s(σ_d, Σ_t)` at `u` given `gap = t - u`.
pub(crate) fn nu_density_gap<T: Real>(k: &Consts<T>, u: T, gap: T, t: T) -> Result<T> {
    let one = T::one();
    if t == one {
        return Ok(one);
    }
    let omu = one - u;
    Ok(k.prefactor(u, gap, t) * k.reg(gap / omu, (one - t) / omu)?)
}

/// Density of `ε_t = bal_s(δ_a, Σ_t)` at `u` given `gap = t - u`.
pub(crate) fn eps_density_gap<T: Real>(k: &Consts<T>, u: T, gap: T, t: T, big_r: T) -> Result<T> {
    let one = T::one();
    if t == one {
        let rho2 = (big_r - one).powi(2) + T::lit(2.0) * big_r * (one - u);
        return Ok((big_r * big_r - one).powf(k.d - k.s) * rho2.powf(k.s / T::lit(2.0) - k.d) / k.w);
    }
    let rt2 = r2(big_r, t);
    let kk = (big_r - one).powi(2) / rt2;
    let omu = one - u;
    let x = kk * gap / omu;
    let outer = (big_r + one).powf(k.d - k.s) / (k.w * rt2.powf(k.d / T::lit(2.0)));
    Ok(outer * k.prefactor(u, gap, t) * k.reg(x, one - x)?)
}

/// Density of `η_t` at `u` for given `Φ` and charges, written as `Δ F̃(x) + Σ Q_i (F̃(x) - F̃(k_i x))`.
pub(crate) fn eta_density_gap<T: Real>(
    k: &Consts<T>,
    u: T,
    gap: T,
    t: T,
    phi: T,
    atoms: &[PointCharge<T>],
) -> Result<T> {
    let one = T::one();
    let half = T::lit(0.5);
    if t == one {
        let pull = atoms.iter().fold(T::zero(), |acc, a| {
            let r2a = a.height * a.height - one;
            acc + a.q * r2a.powf(k.d - k.s) * a.dist2(u).powf(k.s * half - k.d)
        });
        return Ok((phi - pull) / k.w);
    }
    let omu = one - u;
    let x = gap / omu;
    let omx = (one - t) / omu;
    let mut brace = T::zero();
    let mut pull_total = T::zero();
    for a in atoms {
        let rt2 = r2(a.height, t);
        let qi = a.q * (a.height + one).powf(k.d - k.s) / rt2.powf(k.d * half);
        pull_total = pull_total + qi;
        let kk = (a.height - one).powi(2) / rt2;
        brace = brace + qi * k.reg_difference(x, omx, kk)?;
    }
    brace = brace + (phi - pull_total) * k.reg(x, omx)?;
    Ok(k.prefactor(u, gap, t) * brace / k.w)
}

/// `‖ν_t‖ = I((1+t)/2; s/2, d - s/2)`.
pub(crate) fn nu_norm_k<T: Real>(k: &Consts<T>, t: T) -> Result<T> {
    let half = T::lit(0.5);
    beta_reg((T::one() + t) * half, k.s * half, k.d - k.s * half)
}

/// `∫_{-1}^t (1+u)^a (1-u)^b g(u) du` for smooth `g`, accurate for `t` near 1.
pub(crate) fn beta_weight_integral<T, G>(t: T, a: T, b: T, g: G) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let one = T::one();
    let tol = T::lit(1e-14).max(T::lit(16.0) * T::epsilon());
    let (lo_order, hi_order) = (16, 2048);
    if t == one {
        return integrate_jacobi(-one, one, b, a, |u, _, _| g(u), tol, lo_order, hi_order);
    }
    if t <= T::zero() {
        return integrate_jacobi(-one, t, T::zero(), a, |u, _, dhi| g(u) * (one - t + dhi).powf(b), tol, lo_order, hi_order);
    }
    let full = integrate_jacobi(-one, one, b, a, |u, _, _| g(u), tol, lo_order, hi_order)?;
    let tail = integrate_jacobi(t, one, b, T::zero(), |u, _, _| g(u) * (one + u).powf(a), tol, lo_order, hi_order)?;
    Ok(full - tail)
}

/// `‖ε_t‖` for a unit charge at height `R`.
pub(crate) fn eps_norm_k<T: Real>(k: &Consts<T>, t: T, big_r: T) -> Result<T> {
    let one = T::one();
    let half = T::lit(0.5);
    if t <= -one {
        return Ok(T::zero());
    }
    let pre = T::lit(2.0).powf(one - k.d) * gamma_ratio(&[k.d], &[k.d - k.s * half, k.s * half]) * (big_r + one).powf(k.d - k.s)
        / k.w;
    let integral = beta_weight_integral(t, k.s * half - one, k.d - k.s * half - one, |u| {
        r2(big_r, u).powf(-k.d * half)
    })?;
    Ok(pre * integral)
}

/// `Φ_s(t) = W (1 + Σ q_i ‖ε_t(R_i)‖)/‖ν_t‖`.
pub(crate) fn phi_atoms<T: Real>(k: &Consts<T>, t: T, atoms: &[PointCharge<T>]) -> Result<T> {
    check_cap_height(t)?;
    let mut acc = T::one();
    for a in atoms {
        acc = acc + a.q * eps_norm_k(k, t, a.height)?;
    }
    Ok(k.w * acc / nu_norm_k(k, t)?)
}

/// `Σ q_i (R_i+1)^{d-s}/r_i^d`.
pub(crate) fn pull_atoms<T: Real>(k: &Consts<T>, t: T, atoms: &[PointCharge<T>]) -> T {
    let one = T::one();
    atoms.iter().fold(T::zero(), |acc, a| {
        acc + a.q * (a.height + one).powf(k.d - k.s) / r2(a.height, t).powf(k.d / T::lit(2.0))
    })
}

pub(crate) fn delta_atoms<T: Real>(k: &Consts<T>, t: T, atoms: &[PointCharge<T>]) -> Result<T> {
    Ok(phi_atoms(k, t, atoms)? - pull_atoms(k, t, atoms))
}

/// Signed equilibrium `η_t` of the cap `Σ_t`.
pub(crate) fn eta_measure_atoms<T: Real>(
    params: &Params<T>,
    t: T,
    atoms: &[PointCharge<T>],
) -> Result<SignedCapMeasure<T>> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    let phi = if t == T::one() {
        SphereSignedDensity::from_atoms(atoms, params)?.f
    } else {
        phi_atoms(&k, t, atoms)?
    };
    let edge = if t == T::one() { T::zero() } else { (k.s - k.d) / T::lit(2.0) };
    let owned = atoms.to_vec();
    let density = Arc::new(move |u: T, gap: T| eta_density_gap(&k, u, gap, t, phi, &owned).unwrap_or(T::nan()));
    SignedCapMeasure::new(*params, t, T::zero(), phi, phi, edge, density)
}

/// Finds the first sign change of `f` on a 64-point grid of `(-1, 1]` and bisects it.
/// Returns `None` when `f(1) >= 0`.
pub(crate) fn support_root<T, F>(f: F) -> Result<Option<(T, T)>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let one = T::one();
    if f(one)? >= T::zero() {
        return Ok(None);
    }
    let n = 64usize;
    let mut lo = -one;
    let mut hi = one;
    for i in 1..=n {
        let t = -one + T::lit(2.0) * T::of(i) / T::of(n);
        let v = f(t)?;
        if v < T::zero() {
            hi = t;
            break;
        }
        lo = t;
    }
    let mut f_best = T::infinity();
    let mut t_best = hi;
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v.abs() < f_best.abs() {
            f_best = v;
            t_best = mid;
        }
        if v == T::zero() {
            break;
        }
        if v > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((t_best, f_best)))
}

pub(crate) fn solve_atoms<T: Real>(params: &Params<T>, atoms: &[PointCharge<T>]) -> Result<CapSolution<T>> {
    let k = Consts::new(params)?;
    let root = support_root(|t| {
        if t == T::one() {
            let full = SphereSignedDensity::from_atoms(atoms, params)?;
            Ok(full.support_margin())
        } else {
            delta_atoms(&k, t, atoms)
        }
    })?;
    let (t0, delta, solved_by) = match root {
        Some((t, d)) => (t, d, SolvedBy::InteriorRoot),
        None => (T::one(), T::zero(), SolvedBy::BoundaryTEqualsOne),
    };
    let equilibrium = eta_measure_atoms(params, t0, atoms)?;
    Ok(CapSolution {
        t0,
        phi_at_t0: equilibrium.phi,
        delta_at_t0: delta,
        equilibrium,
        solved_by,
        params: *params,
        atoms: atoms.to_vec(),
    })
}

/// Weighted potential `U_s^{η_t} + Q` at height `ξ`.
pub(crate) fn weighted_potential_atoms<T: Real>(
    params: &Params<T>,
    xi: T,
    t: T,
    atoms: &[PointCharge<T>],
) -> Result<T> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    if !(xi >= -T::one() && xi <= T::one()) {
        return Err(Error::domain(format!("height must lie in [-1, 1], got {xi}")));
    }
    let one = T::one();
    let half = T::lit(0.5);
    if t == one {
        return Ok(SphereSignedDensity::from_atoms(atoms, params)?.f);
    }
    let phi = phi_atoms(&k, t, atoms)?;
    if xi <= t {
        return Ok(phi);
    }
    let a = (k.d - k.s) * half;
    let b = k.s * half;
    let dx = xi - t;
    let mut v = phi - phi * beta_reg(dx / (one + xi), a, b)?;
    for c in atoms {
        let rho2 = r2(c.height, xi);
        let arg = (c.height + one).powi(2) * dx / (r2(c.height, t) * (one + xi));
        v = v + c.q * rho2.powf(-b) * beta_reg(arg.min(one), a, b)?;
    }
    Ok(v)
}

/// Density `ν_t'(u)` of the balayage of `σ_d` onto `Σ_t`.
pub fn nu_density<T: Real>(u: T, t: T, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    check_inside(u, t)?;
    nu_density_gap(&k, u, t - u, t)
}

/// Density `ε_t'(u)` of the balayage of `δ_a` onto `Σ_t` (unit charge).
pub fn eps_density<T: Real>(u: T, t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    check_inside(u, t)?;
    eps_density_gap(&k, u, t - u, t, charge.height)
}

/// `‖ν_t‖` in closed form.
pub fn nu_norm<T: Real>(t: T, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    if !(t >= -T::one() && t <= T::one()) {
        return Err(Error::domain(format!("cap height must lie in [-1, 1], got {t}")));
    }
    nu_norm_k(&k, t)
}

/// `‖ε_t‖` by quadrature (unit charge).
pub fn eps_norm<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    if !(t >= -T::one() && t <= T::one()) {
        return Err(Error::domain(format!("cap height must lie in [-1, 1], got {t}")));
    }
    eps_norm_k(&k, t, charge.height)
}

/// `Φ_s(t) = F_s(Σ_t)`.
pub fn phi<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    phi_atoms(&k, t, std::slice::from_ref(charge))
}

/// `Δ(t) = Φ_s(t) - q(R+1)^{d-s}/r^d`.
pub fn delta<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    delta_atoms(&k, t, std::slice::from_ref(charge))
}

/// Density `η_t'(u)` of the signed equilibrium of `Σ_t`.
pub fn eta_density<T: Real>(u: T, t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    check_inside(u, t)?;
    let atoms = std::slice::from_ref(charge);
    let phi = if t == T::one() {
        SphereSignedDensity::from_atoms(atoms, params)?.f
    } else {
        phi_atoms(&k, t, atoms)?
    };
    eta_density_gap(&k, u, t - u, t, phi, atoms)
}

/// Signed equilibrium `η_t` as a measure.
pub fn eta_measure<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<SignedCapMeasure<T>> {
    eta_measure_atoms(params, t, std::slice::from_ref(charge))
}

/// `ν_t` as a measure; its potential equals `W_s(S^d)` on the cap.
pub fn nu_measure<T: Real>(t: T, params: &Params<T>) -> Result<SignedCapMeasure<T>> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    let w = k.w;
    let edge = if t == T::one() { T::zero() } else { (k.s - k.d) / T::lit(2.0) };
    let density = Arc::new(move |u: T, gap: T| nu_density_gap(&k, u, gap, t).unwrap_or(T::nan()));
    SignedCapMeasure::new(*params, t, T::zero(), w, w, edge, density)
}

/// `ε_t` for a unit charge at `R p`; its potential equals `|z - a|^{-s}` on the cap.
pub fn eps_measure<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<SignedCapMeasure<T>> {
    let k = Consts::new(params)?;
    check_cap_height(t)?;
    let edge = if t == T::one() { T::zero() } else { (k.s - k.d) / T::lit(2.0) };
    let big_r = charge.height;
    let density = Arc::new(move |u: T, gap: T| eps_density_gap(&k, u, gap, t, big_r).unwrap_or(T::nan()));
    SignedCapMeasure::new(*params, t, T::zero(), T::nan(), T::nan(), edge, density)
}

/// Extremal support `Σ_{t₀}` and measure for a point charge.
pub fn solve_t0<T: Real>(charge: &PointCharge<T>, params: &Params<T>) -> Result<CapSolution<T>> {
    solve_atoms(params, std::slice::from_ref(charge))
}

/// `U_s^{η_t}(z) + Q(z)` at height `ξ`, in closed form.
pub fn weighted_potential<T: Real>(xi: T, t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    weighted_potential_atoms(params, xi, t, std::slice::from_ref(charge))
}

/// `q(R+1)^{d-s}/r^d - Φ_s(t)`: the coefficient of the singular term of the
/// outward derivative of the weighted potential at the cap edge.
pub fn edge_derivative_diagnostic<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    if !(t > -T::one() && t < T::one()) {
        return Err(Error::domain(format!("edge diagnostic needs -1 < t < 1, got {t}")));
    }
    Ok(-delta(t, charge, params)?)
}

/// Leading coefficient of `(t-u)^{(d-s)/2} ν_t'(u)` as `u -> t`.
pub fn nu_edge_coefficient<T: Real>(t: T, params: &Params<T>) -> Result<T> {
    let k = Consts::new(params)?;
    let one = T::one();
    let half = T::lit(0.5);
    Ok(k.g * rgamma(k.c) * (one - t).powf((k.d - k.s) * half))
}

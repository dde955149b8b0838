//! Boundary cases: `s = d - 2` on `S^d` with `d >= 3`, and the logarithmic kernel on `S^2`.
//!
//! In both cases the balayage onto a cap carries a uniform charge on the
//! boundary ring, stored as `boundary_coeff` of a [`BoundaryMeasureCap`].

use std::sync::Arc;

use crate::cap_riesz::{beta_weight_integral, r2, support_root, CapSolution, SolvedBy};
use crate::measure::{BoundaryMeasureCap, SignedCapMeasure};
use crate::point_field::{PointCharge, SphereSignedDensity};
use crate::sphere::{cap_area, sphere_energy, Kernel, Params, Regime};
use crate::{Error, Real, Result};

fn check_cap_height<T: Real>(t: T) -> Result<()> {
    if t > -T::one() && t <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("cap height must lie in (-1, 1], got {t}")))
    }
}

/// `((1-t)/2)(1-t²)^{d/2-1}`.
fn ring_jacobian<T: Real>(t: T, d: T) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    (one - t) * half * ((one - t) * (one + t)).powf(d * half - one)
}

/// `ν̄_t = bal_{d-2}(σ_d, Σ_t)`.
pub fn nubar<T: Real>(t: T, params: &Params<T>) -> Result<BoundaryMeasureCap<T>> {
    params.require(Regime::Exceptional)?;
    check_cap_height(t)?;
    let w = sphere_energy(params)?;
    let coeff = w * ring_jacobian(t, params.dim());
    SignedCapMeasure::new(*params, t, coeff, w, w, T::zero(), Arc::new(|_: T, _: T| T::one()))
}

/// `ε̄_t = bal_{d-2}(δ_a, Σ_t)` for a unit charge.
pub fn epsbar<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<BoundaryMeasureCap<T>> {
    params.require(Regime::Exceptional)?;
    check_cap_height(t)?;
    let d = params.dim();
    let w = sphere_energy(params)?;
    let big_r = charge.height;
    let one = T::one();
    let coeff = ring_jacobian(t, d) * (big_r + one).powi(2) / r2(big_r, t).powf(d / T::lit(2.0));
    let density = Arc::new(move |u: T, _: T| {
        (big_r * big_r - one).powi(2) / (w * r2(big_r, u).powf(d / T::lit(2.0) + one))
    });
    SignedCapMeasure::new(*params, t, coeff, T::nan(), T::nan(), T::zero(), density)
}

/// `‖ν̄_t‖ = σ_d(Σ_t) + W_{d-2}(S^d)((1-t)/2)(1-t²)^{d/2-1}`.
pub fn nubar_norm<T: Real>(t: T, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    let w = sphere_energy(params)?;
    Ok(cap_area(t, params)? + w * ring_jacobian(t, params.dim()))
}

/// `‖ε̄_t‖` from its one-dimensional integral representation.
pub fn epsbar_norm<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    let d = params.dim();
    let one = T::one();
    let two = T::lit(2.0);
    let half_d = d / two;
    let big_r = charge.height;
    let integral = beta_weight_integral(t, half_d - two, half_d, |u| r2(big_r, u).powf(-half_d))?;
    Ok((d - two) / T::lit(4.0) * (big_r + one).powi(2) * integral)
}

pub(crate) fn phibar_atoms<T: Real>(params: &Params<T>, t: T, atoms: &[PointCharge<T>]) -> Result<T> {
    check_cap_height(t)?;
    let w = sphere_energy(params)?;
    let mut acc = T::one();
    for a in atoms {
        acc = acc + a.q * epsbar_norm(t, a, params)?;
    }
    Ok(w * acc / nubar_norm(t, params)?)
}

pub(crate) fn pullbar_atoms<T: Real>(params: &Params<T>, t: T, atoms: &[PointCharge<T>]) -> T {
    let half_d = params.dim() / T::lit(2.0);
    atoms.iter().fold(T::zero(), |acc, a| {
        acc + a.q * (a.height + T::one()).powi(2) / r2(a.height, t).powf(half_d)
    })
}

/// `Φ̄_{d-2}(t) = W (1 + q‖ε̄_t‖)/‖ν̄_t‖`.
pub fn phibar<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    phibar_atoms(params, t, std::slice::from_ref(charge))
}

/// `Φ̄_{d-2}(t) - q(R+1)²/r^d`.
pub fn deltabar<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    let atoms = std::slice::from_ref(charge);
    Ok(phibar_atoms(params, t, atoms)? - pullbar_atoms(params, t, atoms))
}

pub(crate) fn etabar_measure_atoms<T: Real>(
    params: &Params<T>,
    t: T,
    atoms: &[PointCharge<T>],
) -> Result<BoundaryMeasureCap<T>> {
    params.require(Regime::Exceptional)?;
    check_cap_height(t)?;
    let d = params.dim();
    let w = sphere_energy(params)?;
    let one = T::one();
    let phi = if t == one {
        SphereSignedDensity::from_atoms(atoms, params)?.f
    } else {
        phibar_atoms(params, t, atoms)?
    };
    let coeff = ring_jacobian(t, d) * (phi - pullbar_atoms(params, t, atoms));
    let owned = atoms.to_vec();
    let density = Arc::new(move |u: T, _: T| {
        let pull = owned.iter().fold(T::zero(), |acc, a| {
            acc + a.q * (a.height * a.height - one).powi(2) / r2(a.height, u).powf(d / T::lit(2.0) + one)
        });
        (phi - pull) / w
    });
    SignedCapMeasure::new(*params, t, coeff, phi, phi, T::zero(), density)
}

/// Signed equilibrium `η̄_t` of `Σ_t` for `s = d - 2`.
pub fn etabar<T: Real>(t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<BoundaryMeasureCap<T>> {
    etabar_measure_atoms(params, t, std::slice::from_ref(charge))
}

pub(crate) fn solve_exceptional_atoms<T: Real>(params: &Params<T>, atoms: &[PointCharge<T>]) -> Result<CapSolution<T>> {
    params.require(Regime::Exceptional)?;
    let root = support_root(|t| {
        if t == T::one() {
            Ok(SphereSignedDensity::from_atoms(atoms, params)?.support_margin())
        } else {
            Ok(phibar_atoms(params, t, atoms)? - pullbar_atoms(params, t, atoms))
        }
    })?;
    let (t0, delta, solved_by) = match root {
        Some((t, d)) => (t, d, SolvedBy::InteriorRoot),
        None => (T::one(), T::zero(), SolvedBy::BoundaryTEqualsOne),
    };
    let equilibrium = etabar_measure_atoms(params, t0, atoms)?;
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

/// Extremal support and measure for `s = d - 2`.
pub fn solve_t0_exceptional<T: Real>(charge: &PointCharge<T>, params: &Params<T>) -> Result<CapSolution<T>> {
    solve_exceptional_atoms(params, std::slice::from_ref(charge))
}

/// Weighted potential of `η̄_t` in closed form.
pub(crate) fn weighted_potential_exceptional_atoms<T: Real>(
    params: &Params<T>,
    xi: T,
    t: T,
    atoms: &[PointCharge<T>],
) -> Result<T> {
    params.require(Regime::Exceptional)?;
    check_cap_height(t)?;
    let one = T::one();
    if t == one {
        return Ok(SphereSignedDensity::from_atoms(atoms, params)?.f);
    }
    let phi = phibar_atoms(params, t, atoms)?;
    if xi <= t {
        return Ok(phi);
    }
    let e = params.dim() / T::lit(2.0) - one;
    let shape = ((one + t) / (one + xi)).powf(e);
    Ok(atoms.iter().fold(phi * shape, |acc, a| {
        acc + a.q * (r2(a.height, xi).powf(-e) - r2(a.height, t).powf(-e) * shape)
    }))
}

/// `U^{η̄_t} + Q` at height `ξ`.
pub fn weighted_potential_exceptional<T: Real>(
    xi: T,
    t: T,
    charge: &PointCharge<T>,
    params: &Params<T>,
) -> Result<T> {
    weighted_potential_exceptional_atoms(params, xi, t, std::slice::from_ref(charge))
}

/// `W_{d-2}(S^d)(1+t)^{d/2-1}(1+ξ)^{1-d/2}`, the potential of `ν̄_t` at `ξ > t`.
pub fn nubar_potential_outside<T: Real>(xi: T, t: T, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    let e = params.dim() / T::lit(2.0) - T::one();
    Ok(sphere_energy(params)? * ((T::one() + t) / (T::one() + xi)).powf(e))
}

/// `r^{2-d}(1+t)^{d/2-1}(1+ξ)^{1-d/2}`, the potential of `ε̄_t` at `ξ > t`.
pub fn epsbar_potential_outside<T: Real>(xi: T, t: T, charge: &PointCharge<T>, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    let e = params.dim() / T::lit(2.0) - T::one();
    Ok(r2(charge.height, t).powf(-e) * ((T::one() + t) / (T::one() + xi)).powf(e))
}

/// Moment gaps `|∫u^k dν_{t,s} - ∫u^k dν̄_t|` and the analogue for `ε`, `k = 0..3`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakStarGap<T> {
    pub s: T,
    pub nu: [T; 4],
    pub eps: [T; 4],
}

/// Moment gaps between the `s`-balayage measures and their `s = d - 2` limits.
pub fn weakstar_gap<T: Real>(
    t: T,
    s_values: &[T],
    charge: &PointCharge<T>,
    params: &Params<T>,
) -> Result<Vec<WeakStarGap<T>>> {
    params.require(Regime::Exceptional)?;
    if !(t > -T::one() && t < T::one()) {
        return Err(Error::domain("weak* gaps need -1 < t < 1"));
    }
    let nb = nubar(t, params)?;
    let eb = epsbar(t, charge, params)?;
    let mut nb_m = [T::zero(); 4];
    let mut eb_m = [T::zero(); 4];
    for k in 0..4 {
        nb_m[k] = nb.moment(k as i32)?;
        eb_m[k] = eb.moment(k as i32)?;
    }
    let mut out = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let p = Params::riesz(params.d, s)?;
        p.require(Regime::Riesz)?;
        let nu = crate::cap_riesz::nu_measure(t, &p)?;
        let eps = crate::cap_riesz::eps_measure(t, charge, &p)?;
        let mut gap = WeakStarGap { s, nu: [T::zero(); 4], eps: [T::zero(); 4] };
        for k in 0..4 {
            gap.nu[k] = (nu.moment(k as i32)? - nb_m[k]).abs();
            gap.eps[k] = (eps.moment(k as i32)? - eb_m[k]).abs();
        }
        out.push(gap);
    }
    Ok(out)
}

/// `‖γ_s‖ = sin(πθ)/(πθ)(1+t)^θ` with `θ = 1 - (d-s)/2`, the mass of the boundary layer
/// that concentrates on the ring as `s -> (d-2)⁺`.
pub fn boundary_layer_mass<T: Real>(t: T, s: T, d: u32) -> T {
    let theta = T::one() - (T::of(d as usize) - s) / T::lit(2.0);
    let x = T::PI() * theta;
    let sinc = if x == T::zero() { T::one() } else { x.sin() / x };
    sinc * (T::one() + t).powf(theta)
}

fn log_params<T: Real>() -> Params<T> {
    Params { d: 2, kernel: Kernel::Log }
}

/// `ν̄_{t,0}` and `ε̄_{t,0}` on `S^2` for the logarithmic kernel (unit charge in `ε̄`).
pub fn log_cap_measures<T: Real>(
    t: T,
    charge: &PointCharge<T>,
) -> Result<(BoundaryMeasureCap<T>, BoundaryMeasureCap<T>)> {
    check_cap_height(t)?;
    let one = T::one();
    let half = T::lit(0.5);
    let params = log_params();
    let w0 = log_w0_cap(t)?;
    let nu = SignedCapMeasure::new(params, t, (one - t) * half, w0, w0, T::zero(), Arc::new(|_: T, _: T| T::one()))?;
    let big_r = charge.height;
    let coeff = (one - t) * half * (big_r + one).powi(2) / r2(big_r, t);
    let density = Arc::new(move |u: T, _: T| (big_r * big_r - one).powi(2) / r2(big_r, u).powi(2));
    let eps = SignedCapMeasure::new(params, t, coeff, T::nan(), T::nan(), T::zero(), density)?;
    Ok((nu, eps))
}

/// Logarithmic energy `W_0(Σ_t) = (1+t)/4 - log(2)/2 - log(1+t)/2` of a cap on `S^2`.
pub fn log_w0_cap<T: Real>(t: T) -> Result<T> {
    check_cap_height(t)?;
    let half = T::lit(0.5);
    Ok((T::one() + t) / T::lit(4.0) - half * T::LN_2() - half * (T::one() + t).ln())
}

pub(crate) fn log_f0_atoms<T: Real>(t: T, atoms: &[PointCharge<T>]) -> Result<T> {
    let one = T::one();
    let total = atoms.iter().fold(T::zero(), |acc, a| acc + a.q);
    let mut v = (one + total) * (one + t) / T::lit(4.0) - T::lit(0.5) * T::LN_2() - T::lit(0.5) * (one + t).ln();
    for a in atoms {
        let big_r = a.height;
        let lo = (big_r - one).powi(2) * r2(big_r, t).ln();
        let hi = (big_r + one).powi(2) * ((big_r + one).powi(2)).ln();
        v = v + a.q * (lo - hi) / (T::lit(8.0) * big_r);
    }
    Ok(v)
}

/// Support functional `F_0(Σ_t)` for a point charge on `S^2`.
pub fn log_f0_functional<T: Real>(t: T, charge: &PointCharge<T>) -> Result<T> {
    check_cap_height(t)?;
    log_f0_atoms(t, std::slice::from_ref(charge))
}

pub(crate) fn log_eta_atoms<T: Real>(t: T, atoms: &[PointCharge<T>]) -> Result<BoundaryMeasureCap<T>> {
    check_cap_height(t)?;
    let one = T::one();
    let total = atoms.iter().fold(T::zero(), |acc, a| acc + a.q);
    let pull = atoms.iter().fold(T::zero(), |acc, a| acc + a.q * (a.height + one).powi(2) / r2(a.height, t));
    let coeff = (one - t) / T::lit(2.0) * (one + total - pull);
    let f0 = log_f0_atoms(t, atoms)?;
    let owned = atoms.to_vec();
    let density = Arc::new(move |u: T, _: T| {
        owned.iter().fold(one + total, |acc, a| {
            acc - a.q * (a.height * a.height - one).powi(2) / r2(a.height, u).powi(2)
        })
    });
    SignedCapMeasure::new(log_params(), t, coeff, one + total, f0, T::zero(), density)
}

/// Signed logarithmic equilibrium `η̄_{t,0} = (1+q)ν̄_{t,0} - qε̄_{t,0}`.
pub fn log_eta<T: Real>(t: T, charge: &PointCharge<T>) -> Result<BoundaryMeasureCap<T>> {
    log_eta_atoms(t, std::slice::from_ref(charge))
}

pub(crate) fn log_solve_atoms<T: Real>(atoms: &[PointCharge<T>], closed_form: Option<T>) -> Result<CapSolution<T>> {
    let one = T::one();
    let total = atoms.iter().fold(T::zero(), |acc, a| acc + a.q);
    let delta = |t: T| -> T {
        atoms.iter().fold(one + total, |acc, a| acc - a.q * (a.height + one).powi(2) / r2(a.height, t))
    };
    let (t0, solved_by) = match closed_form {
        Some(t) if t >= one => (one, SolvedBy::BoundaryTEqualsOne),
        Some(t) => (t, SolvedBy::InteriorRoot),
        None => {
            if delta(one) >= T::zero() {
                (one, SolvedBy::BoundaryTEqualsOne)
            } else {
                let (mut lo, mut hi) = (-one, one);
                for _ in 0..200 {
                    let mid = (lo + hi) / T::lit(2.0);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if delta(mid) > T::zero() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                ((lo + hi) / T::lit(2.0), SolvedBy::InteriorRoot)
            }
        }
    };
    let equilibrium = log_eta_atoms(t0, atoms)?;
    let residual = if solved_by == SolvedBy::InteriorRoot { delta(t0) } else { T::zero() };
    Ok(CapSolution {
        t0,
        phi_at_t0: equilibrium.level,
        delta_at_t0: residual,
        equilibrium,
        solved_by,
        params: log_params(),
        atoms: atoms.to_vec(),
    })
}

/// `t₀ = min{1, (R² - 2Rq + 1)/(2R(1+q))}` for the logarithmic point-charge problem.
pub fn log_t0_closed_form<T: Real>(charge: &PointCharge<T>) -> T {
    let one = T::one();
    let (q, r) = (charge.q, charge.height);
    let two = T::lit(2.0);
    ((r * r - two * r * q + one) / (two * r * (one + q))).min(one)
}

/// Extremal support and measure for the logarithmic kernel on `S^2`.
pub fn log_solve_t0<T: Real>(charge: &PointCharge<T>) -> Result<CapSolution<T>> {
    log_solve_atoms(std::slice::from_ref(charge), Some(log_t0_closed_form(charge)))
}

/// `(1+q)/q (4qR - (R-1)²)/(R+1)²`, the limit of the extremal density at the edge of `Σ_{t₀}`.
pub fn log_edge_density<T: Real>(charge: &PointCharge<T>) -> T {
    let one = T::one();
    let (q, r) = (charge.q, charge.height);
    (one + q) / q * (T::lit(4.0) * q * r - (r - one).powi(2)) / (r + one).powi(2)
}

pub(crate) fn log_weighted_potential_atoms<T: Real>(xi: T, t: T, atoms: &[PointCharge<T>]) -> Result<T> {
    check_cap_height(t)?;
    let f0 = log_f0_atoms(t, atoms)?;
    if xi <= t {
        return Ok(f0);
    }
    let one = T::one();
    let half = T::lit(0.5);
    Ok(atoms.iter().fold(f0 + half * ((one + t) / (one + xi)).ln(), |acc, a| {
        acc + half * a.q * (r2(a.height, t) / r2(a.height, xi)).ln()
    }))
}

/// `U_0^{η̄_{t,0}} + Q̄` at height `ξ`.
pub fn log_weighted_potential<T: Real>(xi: T, t: T, charge: &PointCharge<T>) -> Result<T> {
    log_weighted_potential_atoms(xi, t, std::slice::from_ref(charge))
}

/// Logarithmic potential of `ε̄_{t,0}` at `ξ > t`.
pub fn log_epsbar_potential_outside<T: Real>(xi: T, t: T, charge: &PointCharge<T>) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    let big_r = charge.height;
    let rp2 = (big_r + one).powi(2);
    -half * (T::lit(2.0) * (one + xi)).ln() + rp2 / (T::lit(8.0) * big_r) * (rp2 / r2(big_r, t)).ln()
}

//! Geometry of `S^d` in height coordinates: area ratios, sphere energies,
//! ring kernels and radial quadrature.

use crate::quadrature::gauss_jacobi;
use crate::specfun::{gamma_ratio, hyp2f1_split, psi, Norm};
use crate::{Error, Real, Result};

/// Interaction kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel<T> {
    /// `|x - y|^(-s)`.
    Riesz(T),
    /// `log(1/|x - y|)`.
    Log,
}

/// Sphere dimension and kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params<T> {
    pub d: u32,
    pub kernel: Kernel<T>,
}

/// Parameter regime relevant to cap computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `d - 2 < s < d`.
    Riesz,
    /// `s = d - 2` with `d >= 3`.
    Exceptional,
    /// Logarithmic kernel on `S^2`.
    Log,
}

impl<T: Real> Params<T> {
    /// Riesz kernel with exponent `s` on `S^d`.
    pub fn riesz(d: u32, s: T) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("sphere dimension must be at least 2, got {d}")));
        }
        if !(s > T::zero() && s < T::of(d as usize)) {
            return Err(Error::domain(format!("Riesz exponent must satisfy 0 < s < d, got s={s}, d={d}")));
        }
        Ok(Params { d, kernel: Kernel::Riesz(s) })
    }

    /// Logarithmic kernel on `S^d`.
    pub fn log(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("sphere dimension must be at least 2, got {d}")));
        }
        Ok(Params { d, kernel: Kernel::Log })
    }

    /// Dimension as a scalar.
    pub fn dim(&self) -> T {
        T::of(self.d as usize)
    }

    /// Riesz exponent, or zero for the logarithmic kernel.
    pub fn s(&self) -> T {
        match self.kernel {
            Kernel::Riesz(s) => s,
            Kernel::Log => T::zero(),
        }
    }

    pub fn is_log(&self) -> bool {
        matches!(self.kernel, Kernel::Log)
    }

    /// Classifies the parameters for cap computations.
    pub fn regime(&self) -> Result<Regime> {
        match self.kernel {
            Kernel::Log => {
                if self.d == 2 {
                    Ok(Regime::Log)
                } else {
                    Err(Error::domain("logarithmic cap results require d = 2"))
                }
            }
            Kernel::Riesz(s) => {
                let d = self.dim();
                let edge = d - T::lit(2.0);
                let tol = T::lit(1e-12) * d;
                if self.d >= 3 && (s - edge).abs() <= tol {
                    Ok(Regime::Exceptional)
                } else if s > edge && s < d {
                    Ok(Regime::Riesz)
                } else {
                    Err(Error::domain(format!(
                        "cap results need d - 2 <= s < d, got s={s}, d={}",
                        self.d
                    )))
                }
            }
        }
    }

    pub(crate) fn require(&self, want: Regime) -> Result<()> {
        let got = self.regime()?;
        if got == want {
            Ok(())
        } else {
            Err(Error::domain(format!("operation requires the {want:?} regime, parameters are {got:?}")))
        }
    }
}

/// `ω_d / ω_{d-1} = √π Γ(d/2) / Γ((d+1)/2)` for `d >= 1`.
pub fn omega_ratio_d<T: Real>(d: u32) -> Result<T> {
    if d < 1 {
        return Err(Error::domain("omega ratio requires d >= 1"));
    }
    let dd = T::of(d as usize);
    let half = T::lit(0.5);
    Ok(T::PI().sqrt() * gamma_ratio(&[dd * half], &[(dd + T::one()) * half]))
}

/// `ω_d / ω_{d-1}` for the sphere of `params`.
pub fn omega_ratio<T: Real>(params: &Params<T>) -> T {
    omega_ratio_d(params.d).expect("d >= 2 by construction")
}

/// Riesz `s`-energy `W_s(S^d)` or logarithmic energy `W_0(S^d)`.
pub fn sphere_energy<T: Real>(params: &Params<T>) -> Result<T> {
    let d = params.dim();
    let half = T::lit(0.5);
    match params.kernel {
        Kernel::Log => Ok(-T::LN_2() - half * psi(d * half) + half * psi(d)),
        Kernel::Riesz(s) => {
            if !(s > T::zero() && s < d) {
                return Err(Error::domain(format!("sphere energy requires 0 < s < d, got {s}")));
            }
            let g = gamma_ratio(&[d, (d - s) * half], &[d * half, d - s * half]);
            Ok(g / T::lit(2.0).powf(s))
        }
    }
}

/// Ring kernel `κ(u, ξ)`: the average of the kernel between height `ξ` and the ring at height `u`.
///
/// For Riesz kernels with `s >= d - 1` the kernel is infinite at `u = ξ`.
pub fn kappa<T: Real>(u: T, xi: T, params: &Params<T>) -> Result<T> {
    check_height(u)?;
    check_height(xi)?;
    match params.kernel {
        Kernel::Log => Ok(kappa0(u, xi)),
        Kernel::Riesz(s) => kappa_riesz(u.min(xi), u.max(xi), (xi - u).abs(), s, params.dim()),
    }
}

/// Logarithmic ring kernel `-log(1 - uξ + |ξ - u|)/2` on `S^2`.
pub fn kappa0<T: Real>(u: T, xi: T) -> T {
    let (lo, hi) = if u <= xi { (u, xi) } else { (xi, u) };
    -T::lit(0.5) * ((T::one() + hi).ln() + (T::one() - lo).ln())
}

/// Riesz ring kernel for heights `lo <= hi` with `gap = hi - lo` supplied exactly.
pub(crate) fn kappa_riesz<T: Real>(lo: T, hi: T, gap: T, s: T, d: T) -> Result<T> {
    let one = T::one();
    let ends = RingEnds { one_minus_lo: one - lo, one_plus_hi: one + hi, one_plus_lo: one + lo, one_minus_hi: one - hi };
    kappa_riesz_ends(&ends, gap, s, d)
}

/// `1 - lo`, `1 + hi`, `1 + lo`, `1 - hi` for a pair of heights, supplied without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RingEnds<T> {
    pub one_minus_lo: T,
    pub one_plus_hi: T,
    pub one_plus_lo: T,
    pub one_minus_hi: T,
}

pub(crate) fn kappa0_ends<T: Real>(ends: &RingEnds<T>) -> T {
    -T::lit(0.5) * (ends.one_plus_hi.ln() + ends.one_minus_lo.ln())
}

pub(crate) fn kappa_riesz_ends<T: Real>(ends: &RingEnds<T>, gap: T, s: T, d: T) -> Result<T> {
    let one = T::one();
    let half = T::lit(0.5);
    let a = s * half;
    let b = one - (d - s) * half;
    let c = d * half;
    let den = ends.one_minus_lo * ends.one_plus_hi;
    let pre = den.powf(-a);
    if gap <= T::zero() {
        if s < d - one {
            let gauss = gamma_ratio(&[c, d - s - one], &[c - a, c - b]);
            return Ok(pre * gauss);
        }
        return Ok(T::infinity());
    }
    if !(den > T::zero()) {
        return Ok(T::infinity());
    }
    let omz = T::lit(2.0) * gap / den;
    let z = ends.one_plus_lo * ends.one_minus_hi / den;
    Ok(pre * hyp2f1_split(a, b, c, z, omz, Norm::Plain)?)
}

/// Potential of the uniform unit charge on the ring `u = t` at height `ξ`, for `s = d - 2`.
pub fn boundary_potential<T: Real>(t: T, xi: T, params: &Params<T>) -> Result<T> {
    params.require(Regime::Exceptional)?;
    check_height(t)?;
    check_height(xi)?;
    let e = T::one() - params.dim() * T::lit(0.5);
    let one = T::one();
    if xi >= t {
        Ok((one - t).powf(e) * (one + xi).powf(e))
    } else {
        Ok((one + t).powf(e) * (one - xi).powf(e))
    }
}

/// Height `u*` of the Kelvin image of a point at height `u`, for the inversion centred at `R p`.
pub fn kelvin_image_height<T: Real>(u: T, big_r: T) -> Result<T> {
    check_height(u)?;
    if !(big_r > T::one()) {
        return Err(Error::domain("Kelvin centre must satisfy R > 1"));
    }
    let one = T::one();
    let rho2 = big_r * big_r - T::lit(2.0) * big_r * u + one;
    Ok((big_r + one).powi(2) * (one - u) / rho2 - one)
}

fn check_height<T: Real>(u: T) -> Result<()> {
    if u >= -T::one() && u <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("height must lie in [-1, 1], got {u}")))
    }
}

/// Quadrature rule on `[-1, t]` against `(ω_{d-1}/ω_d)(1-u²)^{d/2-1}(t-u)^p du`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialQuadrature<T> {
    pub nodes: Vec<T>,
    /// Distances `t - u` of the nodes to the cap edge, computed without cancellation.
    pub gaps: Vec<T>,
    pub weights: Vec<T>,
    pub t: T,
}

impl<T: Real> RadialQuadrature<T> {
    /// Applies the rule to `f(u, t - u)`.
    pub fn integrate<F: Fn(T, T) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.gaps)
            .zip(&self.weights)
            .fold(T::zero(), |acc, ((&u, &g), &w)| acc + w * f(u, g))
    }
}

/// Builds a Gauss–Jacobi rule of the given order for the radial weight
/// times `(t - u)^singular_exponent`.
pub fn build_quadrature<T: Real>(
    t: T,
    params: &Params<T>,
    order: usize,
    singular_exponent: T,
) -> Result<RadialQuadrature<T>> {
    if !(t > -T::one() && t <= T::one()) {
        return Err(Error::domain(format!("cap height must lie in (-1, 1], got {t}")));
    }
    if order < 4 {
        return Err(Error::domain("quadrature order must be at least 4"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let m = params.dim() / two - one;
    let alpha = if t == one { singular_exponent + m } else { singular_exponent };
    let rule = gauss_jacobi(order, alpha, m)?;
    let half = (t + one) / two;
    let scale = half.powf(alpha + m + one) / omega_ratio(params);
    let mut nodes = Vec::with_capacity(order);
    let mut gaps = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let u = -one + half * (one + x);
        let gap = half * (one - x);
        let extra = if t == one { one } else { (one - u).powf(m) };
        nodes.push(u);
        gaps.push(gap);
        weights.push(w * scale * extra);
    }
    Ok(RadialQuadrature { nodes, gaps, weights, t })
}

/// Integrates `f(u, t - u)` against `(ω_{d-1}/ω_d)(1-u²)^{d/2-1}du` over `[-1, t]`,
/// where `f(u)(t-u)^{-p}` is smooth. Orders double from 64 until two results agree to `tol`.
pub fn integrate_radial<T, F>(t: T, params: &Params<T>, p: T, f: F, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T) -> T,
{
    let mut order = 32;
    let mut prev = {
        let q = build_quadrature(t, params, order, p)?;
        q.integrate(|u, g| f(u, g) * g.powf(-p))
    };
    while order < 2048 {
        order *= 2;
        let q = build_quadrature(t, params, order, p)?;
        let next = q.integrate(|u, g| f(u, g) * g.powf(-p));
        if (next - prev).abs() <= tol * next.abs().max(T::one()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::convergence("radial quadrature did not settle by order 2048"))
}

/// Normalized surface measure `σ_d(Σ_t)` of the cap `{u <= t}`.
pub fn cap_area<T: Real>(t: T, params: &Params<T>) -> Result<T> {
    let h = params.dim() / T::lit(2.0);
    crate::specfun::beta_reg((T::one() + t) / T::lit(2.0), h, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_south_pole_ring() {
        let p = Params::riesz(3, 1.3).unwrap();
        let xi = 0.4;
        let k = kappa(-1.0, xi, &p).unwrap();
        assert!((k - (2.0f64 * (1.0 + xi)).powf(-0.65)).abs() < 1e-14);
    }

    #[test]
    fn regime_detection() {
        assert_eq!(Params::riesz(3, 1.0).unwrap().regime().unwrap(), Regime::Exceptional);
        assert_eq!(Params::riesz(2, 0.5).unwrap().regime().unwrap(), Regime::Riesz);
        assert!(Params::riesz(4, 1.0).unwrap().regime().is_err());
        assert_eq!(Params::<f64>::log(2).unwrap().regime().unwrap(), Regime::Log);
    }
}

//! Independent checks: potentials of cap measures by direct quadrature of the
//! ring kernel, Gauss variational inequalities, a discrete particle minimizer
//! on `S^2`, and a Monte-Carlo estimate of the sphere energy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::axis_field::{field_at, AxisMeasure};
use crate::cap_riesz::CapSolution;
use crate::measure::SignedCapMeasure;
use crate::point_field::PointCharge;
use crate::quadrature::tanh_sinh;
use crate::specfun::ln_beta;
use crate::sphere::{kappa0_ends, kappa_riesz_ends, omega_ratio, Kernel, Params, RingEnds};
use crate::{Error, Real, Result};

const POTENTIAL_TOL: f64 = 1e-11;

fn ring_kernel<T: Real>(params: &Params<T>, ends: &RingEnds<T>, gap: T) -> Result<T> {
    match params.kernel {
        Kernel::Log => Ok(kappa0_ends(ends)),
        Kernel::Riesz(s) => kappa_riesz_ends(ends, gap, s, params.dim()),
    }
}

/// Ring ends for heights `lo <= hi` from `1 + lo`, `1 - lo`, `1 + hi`, `1 - hi`.
fn ends<T: Real>(one_plus_lo: T, one_minus_lo: T, one_plus_hi: T, one_minus_hi: T) -> RingEnds<T> {
    RingEnds { one_minus_lo, one_plus_hi, one_plus_lo, one_minus_hi }
}

/// Potential of `measure` at height `ξ`, by quadrature of the ring kernel against the density
/// plus the ring charge. The integral is split at `ξ` when `ξ` lies on the cap.
pub fn potential_of<T: Real>(measure: &SignedCapMeasure<T>, xi: T) -> Result<T> {
    let params = &measure.params;
    let one = T::one();
    if !(xi >= -one && xi <= one) {
        return Err(Error::domain(format!("height must lie in [-1, 1], got {xi}")));
    }
    let t = measure.t;
    let m = params.dim() / T::lit(2.0) - one;
    let norm = one / omega_ratio(params);
    let omt = one - t;
    let tol = T::lit(POTENTIAL_TOL).max(T::lit(64.0) * T::epsilon());
    let failed = std::cell::Cell::new(None);
    let kern = |e: RingEnds<T>, gap: T| -> T {
        match ring_kernel(params, &e, gap) {
            Ok(v) => v,
            Err(e) => {
                failed.set(Some(e));
                T::zero()
            }
        }
    };
    let weight = |one_plus_u: T, gap_t: T| (one_plus_u * (omt + gap_t)).powf(m);

    let mut total = T::zero();
    if xi >= t {
        let off = xi - t;
        total = total
            + tanh_sinh(
                -one,
                t,
                |u, dlo, dhi| {
                    let k = kern(ends(dlo, omt + dhi, one + xi, one - xi), off + dhi);
                    k * measure.density_with_gap(u, dhi) * weight(dlo, dhi)
                },
                tol,
            )?;
    } else {
        let inside = t - xi;
        if xi > -one {
            total = total
                + tanh_sinh(
                    -one,
                    xi,
                    |u, dlo, dhi| {
                        let gap_t = inside + dhi;
                        kern(ends(dlo, omt + gap_t, one + xi, one - xi), dhi) * measure.density_with_gap(u, gap_t) * weight(dlo, gap_t)
                    },
                    tol,
                )?;
        }
        let opx = one + xi;
        let pole = opx == T::zero();
        total = total
            + if pole {
                // κ(u, -1) = (2(1+u))^{-s/2}; the power is merged with the weight so it cannot overflow.
                tanh_sinh(
                    -one,
                    t,
                    |u, dlo, dhi| {
                        let omu = omt + dhi;
                        let rest = measure.density_with_gap(u, dhi) * omu.powf(m);
                        match params.kernel {
                            Kernel::Riesz(s) => {
                                let a = s * T::lit(0.5);
                                T::lit(2.0).powf(-a) * dlo.powf(m - a) * rest
                            }
                            Kernel::Log => -T::lit(0.5) * (T::LN_2() + dlo.ln()) * dlo.powf(m) * rest,
                        }
                    },
                    tol,
                )?
            } else {
                tanh_sinh(
                xi,
                t,
                    |u, dlo, dhi| {
                        kern(ends(opx, one - xi, opx + dlo, omt + dhi), dlo)
                            * measure.density_with_gap(u, dhi)
                            * weight(opx + dlo, dhi)
                    },
                    tol,
                )?
            };
    }
    if let Some(e) = failed.take() {
        return Err(e);
    }
    let mut value = norm * total;
    if measure.boundary_coeff != T::zero() {
        let e = if t <= xi {
            ends(one + t, omt, one + xi, one - xi)
        } else {
            ends(one + xi, one - xi, one + t, omt)
        };
        value = value + measure.boundary_coeff * ring_kernel(params, &e, (xi - t).abs())?;
    }
    Ok(value)
}

/// Summary of the Gauss variational inequalities on a grid of heights.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalReport<T> {
    /// Mean of `U + Q` over the grid points on the support.
    pub f_estimate: T,
    /// `max |U + Q - F|` over grid points on the support.
    pub max_violation_on_support: T,
    /// `min (U + Q - F)` over grid points off the support; `+∞` when the support is the sphere.
    pub min_margin_off_support: T,
    /// Smallest density value sampled on the support.
    pub min_density_on_support: T,
    pub grid: Vec<T>,
}

impl<T: Real> VariationalReport<T> {
    /// Whether all three inequalities hold to `tol`.
    pub fn passes(&self, tol: T) -> bool {
        self.max_violation_on_support <= tol && self.min_margin_off_support >= -tol && self.min_density_on_support >= -tol
    }
}

/// Checks the variational inequalities for the extremal measure of a solution.
pub fn check_variational<T: Real>(solution: &CapSolution<T>, grid_size: usize) -> Result<VariationalReport<T>> {
    check_variational_measure(&solution.equilibrium, &solution.atoms, grid_size)
}

/// Checks the variational inequalities for any cap measure under the field of `atoms`,
/// using `measure.level` as the constant `F`.
pub fn check_variational_measure<T: Real>(
    measure: &SignedCapMeasure<T>,
    atoms: &[PointCharge<T>],
    grid_size: usize,
) -> Result<VariationalReport<T>> {
    if grid_size < 2 {
        return Err(Error::domain("variational grid needs at least 2 points"));
    }
    let one = T::one();
    let t = measure.t;
    let f = measure.level;
    let grid: Vec<T> = (0..grid_size)
        .map(|j| -one + T::lit(2.0) * T::of(j) / T::of(grid_size - 1))
        .collect();
    let mut on_sum = T::zero();
    let mut on_count = 0usize;
    let mut max_violation = T::zero();
    let mut min_margin = T::infinity();
    for &xi in &grid {
        let v = potential_of(measure, xi)? + field_at(xi, atoms, &measure.params);
        if xi <= t {
            on_sum = on_sum + v;
            on_count += 1;
            max_violation = max_violation.max((v - f).abs());
        } else {
            min_margin = min_margin.min(v - f);
        }
    }
    let mut min_density = T::infinity();
    let samples = 4 * grid_size;
    for j in 0..samples {
        let gap = (t + one) * (T::of(samples - j) - T::lit(0.5)) / T::of(samples);
        min_density = min_density.min(measure.density_with_gap(t - gap, gap));
    }
    if measure.boundary_coeff < T::zero() {
        min_density = min_density.min(measure.boundary_coeff);
    }
    Ok(VariationalReport {
        f_estimate: on_sum / T::of(on_count.max(1)),
        max_violation_on_support: max_violation,
        min_margin_off_support: min_margin,
        min_density_on_support: min_density,
        grid,
    })
}

/// Points on `S^2` minimizing a discrete weighted energy.
#[derive(Debug, Clone)]
pub struct ParticleSystem {
    pub points: Vec<[f64; 3]>,
    pub params: Params<f64>,
    pub atoms: Vec<PointCharge<f64>>,
    /// Current energy `(1/n²) Σ_{i≠j} k(x_i, x_j) + (2/n) Σ Q(x_i)`.
    pub energy: f64,
    /// Energy after every accepted step, starting with the initial configuration.
    pub energy_history: Vec<f64>,
    /// Step length at termination.
    pub step: f64,
    pub iterations: usize,
}

impl ParticleSystem {
    /// Heights of the particles.
    pub fn heights(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[2]).collect()
    }
}

fn pair_kernel(params: &Params<f64>, d2: f64) -> (f64, f64) {
    // Returns k(|x-y|) and the factor c with ∇_x k = c (x - y).
    match params.kernel {
        Kernel::Riesz(s) => {
            let k = d2.powf(-0.5 * s);
            (k, -s * k / d2)
        }
        Kernel::Log => (-0.5 * d2.ln(), -1.0 / d2),
    }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn energy_of(points: &[[f64; 3]], params: &Params<f64>, atoms: &[PointCharge<f64>]) -> f64 {
    let n = points.len() as f64;
    let mut pair = 0.0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let v = sub(&points[i], &points[j]);
            pair += pair_kernel(params, dot(&v, &v)).0;
        }
    }
    let field: f64 = points.iter().map(|p| field_at(p[2], atoms, params)).sum();
    2.0 * pair / (n * n) + 2.0 * field / n
}

/// Per-particle forces `-(n/2) ∇_i E`, projected onto the tangent planes.
fn forces(points: &[[f64; 3]], params: &Params<f64>, atoms: &[PointCharge<f64>]) -> Vec<[f64; 3]> {
    let n = points.len();
    let inv_n = 1.0 / n as f64;
    let mut grad = vec![[0.0f64; 3]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = sub(&points[i], &points[j]);
            let c = pair_kernel(params, dot(&v, &v)).1 * inv_n;
            for k in 0..3 {
                grad[i][k] += c * v[k];
                grad[j][k] -= c * v[k];
            }
        }
    }
    for (p, g) in points.iter().zip(grad.iter_mut()) {
        for a in atoms {
            let v = [p[0], p[1], p[2] - a.height];
            let c = a.q * pair_kernel(params, dot(&v, &v)).1;
            for k in 0..3 {
                g[k] += c * v[k];
            }
        }
        let radial = dot(g, p);
        for k in 0..3 {
            g[k] = -(g[k] - radial * p[k]);
        }
    }
    grad
}

/// Projected gradient descent with backtracking for `n` points on `S^2`.
///
/// Deterministic for a given seed. Accepted steps never increase the energy.
pub fn minimize_particles(
    n: usize,
    params: &Params<f64>,
    field: &AxisMeasure<f64>,
    seed: u64,
    iters: usize,
) -> Result<ParticleSystem> {
    if n < 2 {
        return Err(Error::domain("particle system needs at least 2 points"));
    }
    if params.d != 2 {
        return Err(Error::domain("particle minimization is implemented on S^2 only"));
    }
    let atoms = field.atoms().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let rho = (1.0 - z * z).sqrt();
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect();
    let mut energy = energy_of(&points, params, &atoms);
    if !energy.is_finite() {
        return Err(Error::convergence("initial particle energy is not finite"));
    }
    let mut history = vec![energy];
    let mut step = 0.1 / n as f64;
    let mut iterations = 0;
    'outer: for _ in 0..iters {
        iterations += 1;
        let f = forces(&points, params, &atoms);
        let mut backtracks = 0;
        loop {
            let trial: Vec<[f64; 3]> = points
                .iter()
                .zip(&f)
                .map(|(p, g)| {
                    let q = [p[0] + step * g[0], p[1] + step * g[1], p[2] + step * g[2]];
                    let r = dot(&q, &q).sqrt();
                    [q[0] / r, q[1] / r, q[2] / r]
                })
                .collect();
            let e = energy_of(&trial, params, &atoms);
            if e.is_finite() && e < energy {
                points = trial;
                energy = e;
                history.push(e);
                step = (step * 1.2).min(1.0);
                break;
            }
            step *= 0.5;
            backtracks += 1;
            if backtracks > 60 || step < 1e-14 {
                break 'outer;
            }
        }
    }
    Ok(ParticleSystem { points, params: *params, atoms, energy, energy_history: history, step, iterations })
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// Exponent `e` of the mass law `μ({h > t₀ - δ}) ~ C δ^e` at the edge of an extremal cap.
fn edge_mass_exponent(params: &Params<f64>) -> f64 {
    match params.kernel {
        Kernel::Riesz(s) if params.regime().ok() == Some(crate::sphere::Regime::Riesz) => {
            2.0 - (params.dim() - s) / 2.0
        }
        _ => 1.0,
    }
}

/// Estimate of the top of the support from particle heights.
///
/// Uses the mean excess over the 80% height quantile `L`: under the edge law
/// `μ({h > t₀ - δ}) ~ C δ^e` one has `E[h - L | h > L] = (t₀ - L)/(e + 1)`.
/// The result is clamped to `[max height, 1]`.
pub fn empirical_support_height(system: &ParticleSystem) -> f64 {
    let mut h = system.heights();
    h.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let Some(&max) = h.last() else {
        return -1.0;
    };
    let level = quantile(&h, 0.8);
    let top: Vec<f64> = h.iter().copied().filter(|&x| x > level).collect();
    if top.is_empty() {
        return max;
    }
    let excess = top.iter().map(|x| x - level).sum::<f64>() / top.len() as f64;
    let e = edge_mass_exponent(&system.params);
    (level + (e + 1.0) * excess).max(max).min(1.0)
}

/// Number of equal height bins on `[-1, t]` for comparing `n` particles with a density on `S^2`.
///
/// Each bin spans at least three mean particle spacings `δ = sqrt(2π(1+t)/n)`, so that
/// the latitude rings formed by the minimizer do not alias with the bins.
pub fn ring_resolved_bins(n: usize, t: f64) -> usize {
    let spacing = (std::f64::consts::TAU * (1.0 + t) / n as f64).sqrt();
    (((1.0 + t) / (3.0 * spacing)).floor() as usize).max(2)
}

/// Fraction of particles in each of `bins` equal bins of `[lo, hi]`.
pub fn height_histogram(system: &ParticleSystem, lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let width = (hi - lo) / bins as f64;
    for h in system.heights() {
        if h < lo || h > hi {
            continue;
        }
        let k = (((h - lo) / width) as usize).min(bins - 1);
        counts[k] += 1.0;
    }
    let n = system.points.len() as f64;
    counts.iter().map(|c| c / n).collect()
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn rank_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        num += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    num / (va * vb).sqrt()
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Monte-Carlo estimate of `∬ |x - y|^{-s} dσ_d dσ_d`.
///
/// Pairs are built explicitly in `R^{d+1}`; the second point is placed at a
/// separation drawn from a Beta law that oversamples close pairs, and samples are
/// reweighted accordingly so the estimator has finite variance for all `0 < s < d`.
pub fn sphere_energy_monte_carlo(params: &Params<f64>, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    let Kernel::Riesz(s) = params.kernel else {
        return Err(Error::domain("Monte-Carlo energy is implemented for Riesz kernels"));
    };
    if samples < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let d = params.d as usize;
    let half_d = d as f64 / 2.0;
    let a = 0.75 * (d as f64 - s);
    let proposal = Beta::new(a, half_d).map_err(|e| Error::domain(e.to_string()))?;
    let log_ratio = ln_beta(a, half_d) - ln_beta(half_d, half_d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = d + 1;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; dim];
    let mut w = vec![0.0; dim];
    for _ in 0..samples {
        for xi in x.iter_mut() {
            *xi = StandardNormal.sample(&mut rng);
        }
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= nx);
        for wi in w.iter_mut() {
            *wi = StandardNormal.sample(&mut rng);
        }
        let proj: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
        w.iter_mut().zip(&x).for_each(|(wi, xi)| *wi -= proj * xi);
        let nw = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        let v: f64 = proposal.sample(&mut rng);
        let cos = 1.0 - 2.0 * v;
        let sin = (4.0 * v * (1.0 - v)).sqrt();
        let dist2: f64 = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let y = cos * xi + sin * wi / nw;
                (xi - y) * (xi - y)
            })
            .sum();
        let weight = (log_ratio + (half_d - a) * v.ln()).exp();
        let value = weight * dist2.powf(-0.5 * s);
        sum += value;
        sum_sq += value * value;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(MonteCarloEstimate { mean, std_error: (var / n).sqrt() })
}

/// Draws `n` independent uniform points on `S^2` (used as a baseline for the particle oracle).
pub fn uniform_points(n: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let rho = (1.0 - z * z).sqrt();
            [rho * phi.cos(), rho * phi.sin(), z]
        })
        .collect()
}

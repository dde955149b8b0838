//! Gauss–Jacobi rules (Golub–Welsch) and tanh–sinh quadrature.
//!
//! Integrands receive the abscissa together with its distances to both
//! interval ends, so endpoint singularities can be evaluated without
//! cancellation.

use crate::specfun::ln_gamma_signed;
use crate::{Error, Real, Result};

/// Nodes and weights of an interpolatory quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule<T> {
    /// Abscissae in increasing order.
    pub nodes: Vec<T>,
    /// Positive weights matching `nodes`.
    pub weights: Vec<T>,
}

/// Gauss–Jacobi rule on `[-1, 1]` for the weight `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi<T: Real>(n: usize, alpha: T, beta: T) -> Result<GaussRule<T>> {
    if n == 0 {
        return Err(Error::domain("quadrature order must be positive"));
    }
    if !(alpha > -T::one() && beta > -T::one()) {
        return Err(Error::domain(format!(
            "Jacobi exponents must exceed -1 (alpha={alpha}, beta={beta})"
        )));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let ab = alpha + beta;
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n];
    diag[0] = (beta - alpha) / (ab + two);
    for (k, d) in diag.iter_mut().enumerate().skip(1) {
        let kk = T::of(k);
        let s = two * kk + ab;
        *d = (beta * beta - alpha * alpha) / (s * (s + two));
    }
    for k in 1..n {
        let kk = T::of(k);
        let s = two * kk + ab;
        let b2 = if k == 1 {
            T::lit(4.0) * (one + alpha) * (one + beta) / ((two + ab).powi(2) * (T::lit(3.0) + ab))
        } else {
            T::lit(4.0) * kk * (kk + alpha) * (kk + beta) * (kk + ab)
                / (s * s * (s + one) * (s - one))
        };
        off[k - 1] = b2.sqrt();
    }
    let mut first = vec![T::zero(); n];
    first[0] = one;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;

    let (lg_a, _) = ln_gamma_signed(alpha + one);
    let (lg_b, _) = ln_gamma_signed(beta + one);
    let (lg_ab, _) = ln_gamma_signed(ab + two);
    let mu0 = ((ab + one) * two.ln() + lg_a + lg_b - lg_ab).exp();

    let mut pairs: Vec<(T, T)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(GaussRule { nodes, weights })
}

/// Gauss–Jacobi rule on `[lo, hi]` for the weight `(hi-u)^alpha_hi (u-lo)^beta_lo`.
pub fn gauss_jacobi_interval<T: Real>(
    lo: T,
    hi: T,
    alpha_hi: T,
    beta_lo: T,
    n: usize,
) -> Result<GaussRule<T>> {
    if !(hi > lo) {
        return Err(Error::domain("empty quadrature interval"));
    }
    let base = gauss_jacobi(n, alpha_hi, beta_lo)?;
    let half = (hi - lo) / T::lit(2.0);
    let scale = half.powf(alpha_hi + beta_lo + T::one());
    let nodes = base.nodes.iter().map(|&x| lo + half * (T::one() + x)).collect();
    let weights = base.weights.iter().map(|&w| w * scale).collect();
    Ok(GaussRule { nodes, weights })
}

/// Integrates `(hi-u)^alpha_hi (u-lo)^beta_lo f(u)` over `[lo, hi]`, doubling
/// the Gauss–Jacobi order from `min_order` until successive values agree to `tol`.
///
/// `f` receives `(u, u - lo, hi - u)`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_jacobi<T, F>(
    lo: T,
    hi: T,
    alpha_hi: T,
    beta_lo: T,
    f: F,
    tol: T,
    min_order: usize,
    max_order: usize,
) -> Result<T>
where
    T: Real,
    F: Fn(T, T, T) -> T,
{
    let mut order = min_order.max(2);
    let mut prev = eval_rule(lo, hi, alpha_hi, beta_lo, order, &f)?;
    while order < max_order {
        order *= 2;
        let next = eval_rule(lo, hi, alpha_hi, beta_lo, order, &f)?;
        if (next - prev).abs() <= tol * next.abs().max(T::min_positive_value()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::convergence(format!(
        "Gauss-Jacobi quadrature did not settle by order {max_order}"
    )))
}

fn eval_rule<T, F>(lo: T, hi: T, alpha_hi: T, beta_lo: T, n: usize, f: &F) -> Result<T>
where
    T: Real,
    F: Fn(T, T, T) -> T,
{
    let base = gauss_jacobi(n, alpha_hi, beta_lo)?;
    let half = (hi - lo) / T::lit(2.0);
    let scale = half.powf(alpha_hi + beta_lo + T::one());
    let mut acc = T::zero();
    for (&x, &w) in base.nodes.iter().zip(&base.weights) {
        let dlo = half * (T::one() + x);
        let dhi = half * (T::one() - x);
        acc = acc + w * f(lo + dlo, dlo, dhi);
    }
    Ok(acc * scale)
}

/// Tanh–sinh quadrature of `f` over `[lo, hi]`.
///
/// `f` receives `(u, u - lo, hi - u)`; the distances are exact even for
/// abscissae crowding an endpoint. Levels are refined until successive
/// estimates agree to `tol` relative to the absolute integral.
pub fn tanh_sinh<T, F>(lo: T, hi: T, f: F, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T, T) -> T,
{
    if !(hi > lo) {
        return Err(Error::domain("empty quadrature interval"));
    }
    let half = (hi - lo) / T::lit(2.0);
    let pi_2 = T::FRAC_PI_2();
    let two = T::lit(2.0);
    let t_max = T::lit(6.5);
    let max_level = 12usize;

    // Sum over abscissae k*h for the odd k (or all k at level 0).
    let sweep = |h: T, step: usize, start: usize| -> (T, T) {
        let mut sum = T::zero();
        let mut abs_sum = T::zero();
        let mut k = start;
        loop {
            let th = T::of(k) * h;
            if th > t_max {
                break;
            }
            let s = pi_2 * th.sinh();
            let e = (-two * s).exp();
            let one_pe = T::one() + e;
            let gap = half * two * e / one_pe;
            if !(gap > T::zero()) {
                break;
            }
            let w = half * pi_2 * th.cosh() * T::lit(4.0) * e / (one_pe * one_pe);
            if k == 0 {
                let v = w * f(lo + half, half, half);
                sum = sum + v;
                abs_sum = abs_sum + v.abs();
            } else {
                let far = two * half - gap;
                let vr = w * f(hi - gap, far, gap);
                let vl = w * f(lo + gap, gap, far);
                sum = sum + vr + vl;
                abs_sum = abs_sum + vr.abs() + vl.abs();
            }
            k += step;
        }
        (sum, abs_sum)
    };

    let mut h = T::one();
    let (mut sum, mut abs_sum) = sweep(h, 1, 0);
    let mut estimate = sum * h;
    for _ in 1..=max_level {
        h = h / two;
        let (s_new, a_new) = sweep(h, 2, 1);
        sum = sum + s_new;
        abs_sum = abs_sum + a_new;
        let next = sum * h;
        let scale = (abs_sum * h).max(T::min_positive_value());
        if !next.is_finite() {
            return Err(Error::convergence("tanh-sinh integrand is not finite"));
        }
        if (next - estimate).abs() <= tol * scale {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::convergence(format!(
        "tanh-sinh quadrature did not settle after {max_level} levels"
    )))
}

/// Implicit QL iteration on a symmetric tridiagonal matrix.
///
/// On return `diag` holds the eigenvalues and `first` the first component of
/// each normalized eigenvector. `off[i]` couples rows `i` and `i + 1`.
fn tridiagonal_ql<T: Real>(diag: &mut [T], off: &mut [T], first: &mut [T]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    off[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::convergence("tridiagonal QL iteration stalled"));
            }
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(T::one());
            let signed_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + off[l] / (g + signed_r);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let fz = first[i + 1];
                first[i + 1] = s * first[i] + c * fz;
                first[i] = c * first[i] - s * fz;
            }
            if deflated {
                continue;
            }
            diag[l] = diag[l] - p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

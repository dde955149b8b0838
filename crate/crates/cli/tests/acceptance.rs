//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_caps::axis_field::{axis_phi_delta, axis_solve_t, axis_weighted_potential, AxisMeasure};
use riesz_caps::cap_exceptional::{
    epsbar, log_edge_density, log_f0_functional, log_solve_t0, log_t0_closed_form, nubar,
    nubar_potential_outside, epsbar_potential_outside, solve_t0_exceptional, weakstar_gap,
};
use riesz_caps::cap_riesz::{
    delta, eps_measure, eps_norm, nu_measure, nu_norm, phi, solve_t0, weighted_potential,
};
use riesz_caps::oracle::{
    check_variational, empirical_support_height, height_histogram, minimize_particles, potential_of,
    rank_correlation, ring_resolved_bins, sphere_energy_monte_carlo,
};
use riesz_caps::point_field::{field_potential_on_axis, full_support_margin, gonchar_root};
use riesz_caps::quadrature::integrate_jacobi;
use riesz_caps::specfun::{appell_f1_euler, gamma_ratio, hyp2f1_regularized, HypArgs};
use riesz_caps::sphere::sphere_energy;
use riesz_caps::{CapSolution64, Params64, PointCharge64, SignedCapMeasure64};
use riesz_caps_cli::{read_csv, run, Scenario};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ok<V, E: std::fmt::Display>(r: Result<V, E>) -> Result<V, String> {
    r.map_err(|e| e.to_string())
}

fn newton() -> (Params64, PointCharge64) {
    (Params64::riesz(2, 1.0).unwrap(), PointCharge64::new(1.0, 1.3).unwrap())
}

/// Gap-parametrized grid of `n` points in `[-1, t)`.
fn cap_grid(t: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|j| {
            let gap = (t + 1.0) * (n - j) as f64 / n as f64;
            (t - gap, gap)
        })
        .collect()
}

/// Limit of the density at the cap edge, extrapolated linearly in `sqrt(gap)`.
fn edge_limit(m: &SignedCapMeasure64) -> f64 {
    let (g1, g2) = (1e-6, 1e-8);
    let (f1, f2) = (m.density_with_gap(m.t - g1, g1), m.density_with_gap(m.t - g2, g2));
    let (r1, r2) = (g1.sqrt(), g2.sqrt());
    (f2 * r1 - f1 * r2) / (r1 - r2)
}

/// Shared checks of criteria 6 and 11 for an interior support solution.
fn support_checks(sol: &CapSolution64) -> Outcome {
    let m = &sol.equilibrium;
    ensure(sol.delta_at_t0.abs() < 1e-10, format!("Δ(t₀) = {:e}", sol.delta_at_t0))?;
    let min_density = cap_grid(sol.t0, 500)
        .into_iter()
        .map(|(u, g)| m.density_with_gap(u, g))
        .fold(f64::INFINITY, f64::min);
    ensure(min_density >= -1e-10, format!("min density {min_density:e}"))?;
    let edge = edge_limit(m);
    ensure(edge.abs() < 1e-4, format!("edge limit {edge:e}"))?;
    ensure((m.mass - 1.0).abs() < 1e-8, format!("mass {}", m.mass))?;
    let rep = ok(check_variational(sol, 201))?;
    ensure(rep.passes(1e-5), format!("variational report {rep:?}"))?;
    Ok(format!(
        "t0={:.12} |Δ|={:.1e} min η'={:.3e} edge={:.1e} mass-1={:.1e} viol={:.1e} margin={:.1e}",
        sol.t0,
        sol.delta_at_t0.abs(),
        min_density,
        edge,
        m.mass - 1.0,
        rep.max_violation_on_support,
        rep.min_margin_off_support
    ))
}

fn c01_golden_ratio() -> Outcome {
    let phi_gold = (1.0 + 5f64.sqrt()) / 2.0;
    let rho: f64 = ok(gonchar_root(2))?;
    ensure((rho - phi_gold).abs() < 1e-12, format!("ρ₊ = {rho}"))?;
    let p = Params64::riesz(2, 1.0).unwrap();
    let margin = |r: f64| full_support_margin(&PointCharge64::new(1.0, r).unwrap(), &p).unwrap();
    let (mut lo, mut hi) = (2.0, 3.5);
    ensure(margin(lo) < 0.0 && margin(hi) > 0.0, "margin not bracketed")?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if margin(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_star = 0.5 * (lo + hi);
    ensure((r_star - 1.0 - phi_gold).abs() < 1e-10, format!("sign change at R = {r_star}"))?;
    Ok(format!("ρ₊-φ={:.1e} R*-1-φ={:.1e}", rho - phi_gold, r_star - 1.0 - phi_gold))
}

fn c02_gonchar_asymptotics() -> Outcome {
    let ln3 = 3f64.ln();
    let mut scaled = Vec::new();
    for d in [25u32, 50, 100, 200] {
        let rho: f64 = ok(gonchar_root(d))?;
        let err = d as f64 * (rho - 1.0) - ln3;
        scaled.push((d, err));
    }
    for w in scaled.windows(2) {
        let ((d1, e1), (d2, e2)) = (w[0], w[1]);
        ensure(e1 > 0.0 && e2 > 0.0 && e2 < e1, format!("not monotone: {scaled:?}"))?;
        ensure(d2 as f64 * e2 <= d1 as f64 * e1, format!("slower than C/d: {scaled:?}"))?;
    }
    let ratios: Vec<String> = scaled.windows(2).map(|w| format!("{:.4}", w[1].1 / w[0].1)).collect();
    Ok(format!("errors {:?} ratios {}", scaled.iter().map(|x| format!("{:.3e}", x.1)).collect::<Vec<_>>(), ratios.join(",")))
}

fn c03_sphere_energy() -> Outcome {
    let w1 = ok(sphere_energy(&Params64::riesz(2, 1.0).unwrap()))?;
    ensure(w1 == 1.0, format!("W₁(S²) = {w1:e}"))?;
    let w0 = ok(sphere_energy(&Params64::log(2).unwrap()))?;
    ensure((w0 - (0.5 - 2f64.ln())).abs() < 1e-12, format!("W₀(S²) = {w0}"))?;
    let mut z = Vec::new();
    for (k, s) in [0.5, 1.0, 1.5, 2.5].into_iter().enumerate() {
        let p = Params64::riesz(3, s).unwrap();
        let exact = ok(sphere_energy(&p))?;
        let mc = ok(sphere_energy_monte_carlo(&p, 1_000_000, 2024 + k as u64))?;
        let score = (mc.mean - exact) / mc.std_error;
        ensure(score.abs() < 3.0, format!("s={s}: W={exact} MC={}±{}", mc.mean, mc.std_error))?;
        z.push(format!("{score:+.2}"));
    }
    Ok(format!("W1-1={:.0e} W0 err={:.1e} MC z-scores [{}]", w1 - 1.0, w0 - (0.5 - 2f64.ln()), z.join(",")))
}

fn random_riesz(rng: &mut ChaCha8Rng) -> Params64 {
    let d: u32 = rng.random_range(2..=5);
    let lo = (d as f64 - 2.0).max(0.0) + 0.05;
    let s = rng.random_range(lo..d as f64 - 0.05);
    Params64::riesz(d, s).unwrap()
}

fn c04_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = random_riesz(&mut rng);
        let (d, s) = (p.dim(), p.s());
        let t: f64 = rng.random_range(-0.9..0.95);
        let closed = ok(nu_norm(t, &p))?;
        let c = gamma_ratio(&[d], &[d - s / 2.0, s / 2.0]) * 2f64.powf(1.0 - d);
        let integral = ok(integrate_jacobi(
            -1.0,
            t,
            0.0,
            s / 2.0 - 1.0,
            |_, _, dhi| (1.0 - t + dhi).powf(d - s / 2.0 - 1.0),
            1e-14,
            16,
            4096,
        ))?;
        let err = (closed - c * integral).abs();
        worst = worst.max(err);
        ensure(err < 1e-9, format!("d={d} s={s} t={t}: {closed} vs {}", c * integral))?;
    }
    let mut worst_eps: f64 = 0.0;
    for _ in 0..5 {
        let p = random_riesz(&mut rng);
        let charge = PointCharge64::new(1.0, rng.random_range(1.1..3.0)).unwrap();
        let target = ok(field_potential_on_axis(&charge, &p))? / ok(sphere_energy(&p))?;
        for t in [1.0, 1.0 - 1e-12] {
            let e = ok(eps_norm(t, &charge, &p))?;
            worst_eps = worst_eps.max((e - target).abs());
            ensure((e - target).abs() < 1e-8, format!("{p:?} R={}: ‖ε‖={e} vs {target}", charge.height))?;
        }
    }
    Ok(format!("max |‖ν‖ closed - quadrature| = {worst:.1e}; max |‖ε‖(1) - U/W| = {worst_eps:.1e}"))
}

fn c05_balayage() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let p = random_riesz(&mut rng);
        let s = p.s();
        let t: f64 = rng.random_range(-0.6..0.6);
        let charge = PointCharge64::new(1.0, rng.random_range(1.1..3.0)).unwrap();
        let w = ok(sphere_energy(&p))?;
        let nu = ok(nu_measure(t, &p))?;
        let eps = ok(eps_measure(t, &charge, &p))?;
        for j in 0..10 {
            let xi = -1.0 + (t + 1.0) * j as f64 / 9.0;
            let un = ok(potential_of(&nu, xi))?;
            let ue = ok(potential_of(&eps, xi))?;
            let target = charge.dist2(xi).powf(-s / 2.0);
            worst = worst.max((un - w).abs()).max((ue - target).abs());
            ensure((un - w).abs() < 1e-6, format!("{p:?} t={t} ξ={xi}: U^ν={un} W={w}"))?;
            ensure((ue - target).abs() < 1e-6, format!("{p:?} t={t} ξ={xi}: U^ε={ue} vs {target}"))?;
        }
        for j in 1..=5 {
            let xi = t + (1.0 - t) * j as f64 / 5.0;
            let un = ok(potential_of(&nu, xi))?;
            let ue = ok(potential_of(&eps, xi))?;
            let target = charge.dist2(xi).powf(-s / 2.0);
            ensure(un < w && ue < target, format!("{p:?} t={t} ξ={xi}: not strictly smaller off the cap"))?;
        }
    }
    Ok(format!("max on-cap error {worst:.1e}"))
}

fn c06_support_solution() -> Outcome {
    let (p, c) = newton();
    let sol = ok(solve_t0(&c, &p))?;
    support_checks(&sol)
}

fn c07_phi_unimodal() -> Outcome {
    let mut details = Vec::new();
    for (p, c) in [
        newton(),
        (Params64::riesz(2, 0.5).unwrap(), PointCharge64::new(1.0, 1.5).unwrap()),
        (Params64::riesz(3, 1.5).unwrap(), PointCharge64::new(0.7, 1.4).unwrap()),
    ] {
        let sol = ok(solve_t0(&c, &p))?;
        let n = 200;
        let grid: Vec<f64> = (0..n).map(|j| -1.0 + 2.0 * (j + 1) as f64 / (n + 1) as f64).collect();
        let vals = grid.iter().map(|&t| phi(t, &c, &p)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        let k = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        ensure(vals[..=k].windows(2).all(|w| w[1] < w[0]), format!("{p:?}: not decreasing before minimum"))?;
        ensure(vals[k..].windows(2).all(|w| w[1] > w[0]), format!("{p:?}: not increasing after minimum"))?;
        let h = 2.0 / (n + 1) as f64;
        ensure((grid[k] - sol.t0).abs() <= h, format!("{p:?}: grid minimum {} vs t₀ {}", grid[k], sol.t0))?;
        let phi0 = ok(phi(sol.t0, &c, &p))?;
        ensure(phi0 <= vals[k] + 1e-12, format!("{p:?}: Φ(t₀) = {phi0} above grid minimum {}", vals[k]))?;
        details.push(format!("argmin {:.4} t0 {:.4}", grid[k], sol.t0));
    }
    Ok(details.join("; "))
}

fn c08_exceptional() -> Outcome {
    let p = Params64::riesz(3, 1.0).unwrap();
    let c = PointCharge64::new(1.0, 1.5).unwrap();
    let sol = ok(solve_t0_exceptional(&c, &p))?;
    let coeff = sol.equilibrium.boundary_coeff;
    ensure(coeff.abs() < 1e-10, format!("boundary coefficient {coeff:e}"))?;
    let edge = sol.equilibrium.density(sol.t0);
    ensure(edge > 0.0, format!("edge density {edge}"))?;
    let w = ok(sphere_energy(&p))?;
    let mut worst: f64 = 0.0;
    for t in [-0.4, 0.2, 0.6] {
        let nb = ok(nubar(t, &p))?;
        let eb = ok(epsbar(t, &c, &p))?;
        for j in 0..12 {
            let xi = -1.0 + 2.0 * j as f64 / 11.0;
            let (wn, we) = if xi <= t {
                (w, 1.0 / c.dist2(xi).sqrt())
            } else {
                (ok(nubar_potential_outside(xi, t, &p))?, ok(epsbar_potential_outside(xi, t, &c, &p))?)
            };
            let un = ok(potential_of(&nb, xi))?;
            let ue = ok(potential_of(&eb, xi))?;
            worst = worst.max((un - wn).abs()).max((ue - we).abs());
            ensure((un - wn).abs() < 1e-6, format!("t={t} ξ={xi}: U^ν̄={un} vs {wn}"))?;
            ensure((ue - we).abs() < 1e-6, format!("t={t} ξ={xi}: U^ε̄={ue} vs {we}"))?;
        }
    }
    Ok(format!("t0={:.10} coeff={coeff:.1e} edge density={edge:.6} max potential error {worst:.1e}", sol.t0))
}

fn c09_log_closed_forms() -> Outcome {
    let c = PointCharge64::new(1.0, 2.0).unwrap();
    let t0 = log_t0_closed_form(&c);
    ensure((t0 - 0.125).abs() <= 1e-14, format!("closed-form t₀ = {t0}"))?;
    let lambda = AxisMeasure::single(&c).map_err(|e| e.to_string())?;
    let bisected = ok(axis_solve_t(&lambda, &Params64::log(2).unwrap()))?;
    ensure((bisected.t0 - 0.125).abs() < 1e-12, format!("bisected t₀ = {}", bisected.t0))?;
    let sol = ok(log_solve_t0(&c))?;
    let limit = sol.equilibrium.density(sol.t0);
    ensure((limit - 14.0 / 9.0).abs() < 1e-12, format!("edge density {limit}"))?;
    ensure((log_edge_density(&c) - 14.0 / 9.0).abs() < 1e-12, "point-charge edge formula")?;
    let h = 1e-5;
    let deriv = (ok(log_f0_functional(t0 + h, &c))? - ok(log_f0_functional(t0 - h, &c))?) / (2.0 * h);
    ensure(deriv.abs() < 1e-6, format!("F₀'(t₀) ≈ {deriv:e}"))?;
    Ok(format!("t0={t0} bisection err={:.1e} edge-14/9={:.1e} F0'={deriv:.1e}", bisected.t0 - 0.125, limit - 14.0 / 9.0))
}

fn c10_weak_star() -> Outcome {
    let p = Params64::riesz(3, 1.0).unwrap();
    let c = PointCharge64::new(1.0, 1.5).unwrap();
    let gaps = ok(weakstar_gap(0.0, &[1.5, 1.2, 1.05, 1.01], &c, &p))?;
    for w in gaps.windows(2) {
        for k in 0..4 {
            ensure(w[1].nu[k] < w[0].nu[k], format!("ν moment {k} not decreasing at s={}", w[1].s))?;
            ensure(w[1].eps[k] < w[0].eps[k], format!("ε moment {k} not decreasing at s={}", w[1].s))?;
        }
    }
    let summary: Vec<String> = gaps.iter().map(|g| format!("s={}: {:.2e}/{:.2e}", g.s, g.nu[0], g.eps[0])).collect();
    Ok(summary.join(" "))
}

fn c11_axis_superposition() -> Outcome {
    let (p, c) = newton();
    let single = AxisMeasure::single(&c).map_err(|e| e.to_string())?;
    let a = ok(solve_t0(&c, &p))?;
    let b = ok(axis_solve_t(&single, &p))?;
    ensure((a.t0 - b.t0).abs() <= 1e-12, format!("t₀ {} vs {}", a.t0, b.t0))?;
    ensure((a.phi_at_t0 - b.phi_at_t0).abs() <= 1e-12, "Φ(t₀) differs")?;
    for t in [-0.5, 0.0, 0.3, 0.9] {
        let (ph, de) = ok(axis_phi_delta(t, &single, &p))?;
        ensure((ph - ok(phi(t, &c, &p))?).abs() <= 1e-12, format!("Φ({t}) differs"))?;
        ensure((de - ok(delta(t, &c, &p))?).abs() <= 1e-12, format!("Δ({t}) differs"))?;
        for xi in [-0.8, 0.1, 0.95] {
            let u = ok(weighted_potential(xi, t, &c, &p))?;
            let v = ok(axis_weighted_potential(xi, t, &single, &p))?;
            ensure((u - v).abs() <= 1e-12, format!("weighted potential at t={t} ξ={xi} differs"))?;
        }
    }
    for (u, g) in cap_grid(a.t0, 50) {
        let diff = a.equilibrium.density_with_gap(u, g) - b.equilibrium.density_with_gap(u, g);
        ensure(diff.abs() <= 1e-12, format!("density at {u} differs by {diff:e}"))?;
    }
    let pe = Params64::riesz(3, 1.0).unwrap();
    let ce = PointCharge64::new(1.0, 1.5).unwrap();
    let te = ok(solve_t0_exceptional(&ce, &pe))?.t0;
    let tea = ok(axis_solve_t(&AxisMeasure::single(&ce).map_err(|e| e.to_string())?, &pe))?.t0;
    ensure((te - tea).abs() <= 1e-12, "exceptional single atom differs")?;
    let lam = AxisMeasure::new(&[(1.2, 0.3), (1.6, 0.5), (2.5, 0.4)]).map_err(|e| e.to_string())?;
    let three = ok(axis_solve_t(&lam, &p))?;
    let detail = support_checks(&three)?;
    Ok(format!("single-atom paths agree; 3 atoms: {detail}"))
}

fn c12_appendix_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    let mut cases = vec![(0.7, 1.2, 0.9, 0.4, 0.3)];
    while cases.len() < 21 {
        let alpha: f64 = rng.random_range(0.2..2.0);
        let beta: f64 = rng.random_range(0.3..2.5);
        let gamma: f64 = rng.random_range(0.3..2.5);
        if beta + gamma <= alpha + 0.1 {
            continue;
        }
        cases.push((alpha, beta, gamma, rng.random_range(0.05..0.9), rng.random_range(-0.9..0.9)));
    }
    for (alpha, beta, gamma, x, y) in cases {
        let a = -0.8;
        let c = 0.9;
        let b = a + x * (c - a);
        let lhs = ok(integrate_jacobi(
            a,
            b,
            gamma - 1.0,
            beta - 1.0,
            |_, _, dhi| {
                let cmu = (c - b) + dhi;
                let z = y * dhi / cmu;
                cmu.powf(-alpha) * hyp2f1_regularized(HypArgs::new(alpha, beta, gamma, z)).unwrap_or(f64::NAN)
            },
            1e-13,
            16,
            4096,
        ))?;
        let pre = (b - a).powf(beta + gamma - 1.0) * (c - a).powf(-gamma) * (c - b).powf(gamma - alpha);
        let rhs = pre * ok(appell_f1_euler(alpha, beta, gamma, x, y))?;
        let rel = ((lhs - rhs) / rhs).abs();
        worst = worst.max(rel);
        ensure(rel < 1e-8, format!("(α,β,γ,x,y)=({alpha},{beta},{gamma},{x},{y}): {lhs} vs {rhs}"))?;
    }
    Ok(format!("21 tuples, max relative error {worst:.1e}"))
}

fn c13_particles() -> Outcome {
    let (p, c) = newton();
    let sol = ok(solve_t0(&c, &p))?;
    let lambda = AxisMeasure::single(&c).map_err(|e| e.to_string())?;
    let sys = ok(minimize_particles(800, &p, &lambda, 42, 1500))?;
    ensure(sys.energy_history.windows(2).all(|w| w[1] <= w[0]), "energy increased on an accepted step")?;
    let est = empirical_support_height(&sys);
    let bins = ring_resolved_bins(800, sol.t0);
    let hist = height_histogram(&sys, -1.0, sol.t0, bins);
    let width = (sol.t0 + 1.0) / bins as f64;
    let analytic: Vec<f64> = (0..bins).map(|k| sol.equilibrium.density(-1.0 + (k as f64 + 0.5) * width)).collect();
    let rho = rank_correlation(&hist, &analytic);
    ensure((est - sol.t0).abs() <= 0.05, format!("empirical height {est} vs t₀ {}", sol.t0))?;
    ensure(rho > 0.9, format!("rank correlation {rho}"))?;
    Ok(format!("t0={:.4} empirical={est:.4} rank corr={rho:.3} over {bins} bins, iterations={}", sol.t0, sys.iterations))
}

fn out_dir(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("riesz-caps-acceptance-{}-{tag}", std::process::id()))
}

fn scenario(name: &str) -> Result<Scenario, String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::load(&path).map_err(|e| e.to_string())
}

fn column(rows: &[Vec<f64>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k]).collect()
}

fn c14_figures() -> Outcome {
    let mut details = Vec::new();
    for (file, log) in [("fig1.json", false), ("fig2.json", true)] {
        let sc = scenario(file)?;
        let dir = out_dir(&sc.name);
        let first = run(&sc, &dir).map_err(|e| e.to_string())?;
        let again = run(&sc, &out_dir(&format!("{}-again", sc.name))).map_err(|e| e.to_string())?;
        for (f, g) in first.files.iter().zip(&again.files) {
            let same = std::fs::read(f).map_err(|e| e.to_string())? == std::fs::read(g).map_err(|e| e.to_string())?;
            ensure(same, format!("{} is not reproducible", f.display()))?;
        }
        let t0 = first.summary["result"]["t0"].as_f64().ok_or("missing t0")?;
        let (_, panels) = read_csv(&dir.join(format!("{}_panels.csv", sc.name))).map_err(|e| e.to_string())?;
        for panel in &panels {
            let (k, t, coeff) = (panel[0] as usize, panel[1], panel[4]);
            let (_, pot) = read_csv(&dir.join(format!("{}_panel{k}_potential.csv", sc.name))).map_err(|e| e.to_string())?;
            let (_, dens) = read_csv(&dir.join(format!("{}_panel{k}_density.csv", sc.name))).map_err(|e| e.to_string())?;
            let on = pot.iter().filter(|r| r[0] <= t).map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
            ensure(on < 1e-10, format!("{file} panel {k}: potential not constant on the cap ({on:e})"))?;
            let off = pot.iter().filter(|r| r[0] > t).map(|r| r[1] - r[2]).fold(f64::INFINITY, f64::min);
            let at_or_above = t >= t0 - 1e-12;
            ensure((off >= -1e-10) == at_or_above, format!("{file} panel {k}: off-cap margin {off:e} at t={t}"))?;
            let min_density = column(&dens, 1).into_iter().fold(f64::INFINITY, f64::min);
            let above = t > t0 + 1e-12;
            if log {
                let atom = coeff.abs() > 1e-12;
                ensure(atom == ((t - t0).abs() > 1e-12), format!("{file} panel {k}: boundary charge {coeff:e}"))?;
                ensure(!atom || (coeff < 0.0) == above, format!("{file} panel {k}: boundary sign {coeff:e}"))?;
                ensure(min_density > 0.0, format!("{file} panel {k}: interior density {min_density}"))?;
            } else {
                ensure(coeff == 0.0, format!("{file} panel {k}: unexpected boundary charge"))?;
                ensure((min_density < 0.0) == above, format!("{file} panel {k}: density sign {min_density}"))?;
            }
            details.push(format!("{}:{k} t-t0={:+.1} margin={off:+.1e} atom={coeff:+.1e}", sc.name, t - t0));
        }
        let _ = std::fs::remove_dir_all(&dir);
        let _ = std::fs::remove_dir_all(out_dir(&format!("{}-again", sc.name)));
    }
    Ok(details.join(" "))
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("golden-ratio distance", 1, c01_golden_ratio),
        ("Gonchar asymptotics", 1, c02_gonchar_asymptotics),
        ("sphere-energy identities", 30, c03_sphere_energy),
        ("norm cross-checks", 10, c04_norms),
        ("balayage properties", 60, c05_balayage),
        ("support solution", 30, c06_support_solution),
        ("Φ unimodality", 30, c07_phi_unimodal),
        ("exceptional case s=d-2", 30, c08_exceptional),
        ("logarithmic closed forms", 5, c09_log_closed_forms),
        ("weak* convergence", 60, c10_weak_star),
        ("axis superposition", 60, c11_axis_superposition),
        ("appendix identity", 10, c12_appendix_identity),
        ("particle oracle", 300, c13_particles),
        ("figure reproduction", 60, c14_figures),
    ];
    let mut failures = 0;
    for (k, (name, budget, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(budget) => Err(format!("{d} (over {budget} s budget)")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{:.2} s]: {detail}", k + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} [{:.2} s]: {detail}", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}

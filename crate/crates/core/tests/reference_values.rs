//! Special functions and sphere quantities against values computed with mpmath at 30 digits.
#![allow(clippy::excessive_precision)]

use riesz_caps::specfun::{beta_inc_reg, gamma_ratio, hyp2f1, BetaArgs, HypArgs};
use riesz_caps::sphere::{kappa, sphere_energy};
use riesz_caps::Params64;

fn close(got: f64, want: f64, rel: f64) {
    let err = (got - want).abs() / want.abs().max(1.0);
    assert!(err <= rel, "got {got:e}, want {want:e}, relative error {err:e}");
}

#[test]
fn hyp2f1_matches_mpmath() {
    let cases = [
        ((0.5, 1.5, 2.5, 0.3), 1.1080625510569319884),
        ((1.25, 0.75, 1.5, -0.8), 0.68884039687066542066),
        ((0.3, 0.7, 2.0, 0.95), 1.1879891320025153173),
        ((1.0, 1.0, 2.0, 0.5), 1.3862943611198906188),
        ((0.5, 0.5, 1.0, 0.999), 3.0819607086988160164),
        ((2.5, -1.5, 3.25, -0.6), 1.7716509790170152563),
        ((0.25, 1.75, 1.0, 0.9999), 3003.2550035958640477),
    ];
    for ((a, b, c, z), want) in cases {
        let got = hyp2f1(HypArgs::new(a, b, c, z)).unwrap_or_else(|e| panic!("{a} {b} {c} {z}: {e}"));
        close(got, want, 1e-12);
    }
    assert!(hyp2f1(HypArgs::new(2.5, -1.5, 3.25, -3.0)).is_err());
}

#[test]
fn beta_inc_reg_matches_mpmath() {
    let cases = [
        ((0.3, 0.5, 1.5), 0.66074594914354514634),
        ((0.9, 2.5, 0.75), 0.65241901371219671359),
        ((0.01, 0.25, 3.0), 0.44292145583617764555),
        ((0.5, 10.0, 10.0), 0.5),
        ((0.999, 1.5, 0.5), 0.95974334188496819702),
    ];
    for ((x, a, b), want) in cases {
        close(beta_inc_reg(BetaArgs::new(x, a, b)).unwrap(), want, 1e-13);
    }
}

#[test]
fn sphere_energy_matches_direct_integration() {
    let riesz = [
        (2, 0.5, 0.94280904158206336587),
        (2, 1.5, std::f64::consts::SQRT_2),
        (3, 1.2, 0.84507467631637264594),
        (3, 2.5, 1.5737874653547949681),
        (4, 2.7, 0.86094014919224920798),
        (5, 3.5, 0.76707925502347286282),
    ];
    for (d, s, want) in riesz {
        close(sphere_energy(&Params64::riesz(d, s).unwrap()).unwrap(), want, 1e-13);
    }
    let log = [(2, -0.19314718055994530942), (3, -0.25), (4, -0.27648051389327864275)];
    for (d, want) in log {
        close(sphere_energy(&Params64::log(d).unwrap()).unwrap(), want, 1e-14);
    }
}

#[test]
fn ring_kernel_matches_ring_average() {
    let cases = [
        ((0.2, 0.5, 2, 0.5), 0.99363503484206452538),
        ((-0.7, 0.3, 2, 1.5), 0.58352454962051545266),
        ((0.1, -0.9, 3, 1.2), 0.64368180307479992227),
        ((0.4, 0.45, 3, 2.5), 4.2902255079949442788),
        ((-0.3, 0.6, 4, 2.7), 0.38481867248750894778),
    ];
    for ((u, xi, d, s), want) in cases {
        close(kappa(u, xi, &Params64::riesz(d, s).unwrap()).unwrap(), want, 1e-12);
    }
}

#[test]
fn gamma_ratio_half_integers_exact() {
    assert_eq!(gamma_ratio(&[2.0_f64, 0.5], &[1.0, 1.5]), 2.0);
    close(gamma_ratio(&[3.5_f64], &[0.5]), 1.875, 1e-15);
}

#[test]
fn single_precision_support_solution() {
    let params = riesz_caps::Params::<f32>::riesz(2, 1.0).unwrap();
    let charge = riesz_caps::PointCharge::<f32>::new(1.0, 1.3).unwrap();
    let sol = riesz_caps::cap_riesz::solve_t0(&charge, &params).unwrap();
    assert!((sol.t0 - 0.504_812_25).abs() < 1e-4, "{}", sol.t0);
    let w = sphere_energy(&params).unwrap();
    assert!((w - 1.0).abs() < 1e-6);
    let report = riesz_caps::oracle::check_variational(&sol, 41).unwrap();
    assert!(report.passes(1e-3), "{report:?}");
}

use proptest::prelude::*;
use riesz_caps::cap_riesz::nu_norm;
use riesz_caps::specfun::{gamma_ratio, hyp2f1, log_gamma, HypArgs};
use riesz_caps::sphere::kappa;
use riesz_caps::Params64;

fn riesz_params() -> impl Strategy<Value = Params64> {
    (2u32..6, 0.05f64..0.95).prop_map(|(d, f)| {
        let d_f = d as f64;
        Params64::riesz(d, d_f - 2.0 + 2.0 * f).unwrap()
    })
}

proptest! {
    #[test]
    fn kappa_is_symmetric(p in riesz_params(), u in -0.99f64..0.99, xi in -0.99f64..0.99) {
        prop_assume!((u - xi).abs() > 1e-3);
        let a = kappa(u, xi, &p).unwrap();
        let b = kappa(xi, u, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn nu_norm_increases_to_one(p in riesz_params(), t1 in -0.99f64..0.99, dt in 1e-3f64..0.5) {
        let t2 = (t1 + dt).min(1.0);
        let a = nu_norm(t1, &p).unwrap();
        let b = nu_norm(t2, &p).unwrap();
        prop_assert!(a > 0.0 && a < b && b <= 1.0 + 1e-15);
    }

    #[test]
    fn gamma_ratio_agrees_with_log_gamma(x in 0.1f64..30.0, y in 0.1f64..30.0) {
        let direct = gamma_ratio(&[x], &[y]);
        let via_log = (log_gamma(x).unwrap() - log_gamma(y).unwrap()).exp();
        prop_assert!((direct - via_log).abs() <= 1e-11 * via_log);
    }

    #[test]
    fn hyp2f1_euler_transformation(a in -2.0f64..3.0, b in -2.0f64..3.0, c in 0.3f64..4.0, z in -0.9f64..0.9) {
        let lhs = hyp2f1(HypArgs::new(a, b, c, z)).unwrap();
        let rhs = (1.0 - z).powf(c - a - b) * hyp2f1(HypArgs::new(c - a, c - b, c, z)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}

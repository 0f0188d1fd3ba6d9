mod common;

use common::{c, complex, rel};
use proptest::prelude::*;
use qdisc::qspecial::{
    basic_hyper, jackson_integral_01, qgamma, qpoch_complex_exp, qpoch_finite, qpoch_infinite, qpoch_real,
};

const TOL: f64 = 1e-17;

proptest! {
    #[test]
    fn finite_product_splits(t in complex(2.0), q in 0.05f64..0.95, m in 0usize..10, n in 0usize..10) {
        let whole = qpoch_finite(t, q, m + n);
        let split = qpoch_finite(t, q, m) * qpoch_finite(t * q.powi(m as i32), q, n);
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1.0));
    }

    #[test]
    fn complex_exponent_matches_integers(a in complex(0.9), q in 0.1f64..0.9, k in 0usize..12) {
        let q2 = q * q;
        let got = qpoch_complex_exp(a, q2, c(k as f64, 0.0), TOL).unwrap();
        prop_assert!(rel(got, qpoch_finite(a, q2, k)) <= 1e-12);
    }

    #[test]
    fn qgamma_functional_equation(re in -4.0f64..4.0, im in -2.0f64..2.0, q in 0.2f64..0.8) {
        let x = c(re, im);
        // stay clear of the poles at non-positive integers
        prop_assume!((0..=5).all(|k| (x + k as f64).norm() > 0.1));
        let lhs = qgamma(x + 1.0, q, TOL).unwrap();
        let bracket = (c(1.0, 0.0) - qdisc::qspecial::real_pow(q, x)) / (1.0 - q);
        let rhs = bracket * qgamma(x, q, TOL).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-12, "x = {x}: {lhs} vs {rhs}");
    }

    #[test]
    fn q_binomial_theorem(a in complex(2.0), r in 0.0f64..0.9, th in 0.0f64..6.3, q in 0.2f64..0.8) {
        let x = c(r * th.cos(), r * th.sin());
        let lhs = basic_hyper(&[a], &[], q, x, 5000, TOL).unwrap();
        let rhs = qpoch_infinite(a * x, q, TOL) / qpoch_infinite(x, q, TOL);
        prop_assert!(rel(lhs, rhs) <= 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn q_beta_integral(alpha in 1usize..=6, beta in 1usize..=6, q in 0.2f64..0.9) {
        let q2 = q * q;
        let lhs = jackson_integral_01(
            |t| c(t.powi(beta as i32 - 1) * qpoch_real(t * q2, q2, alpha - 1), 0.0),
            q2,
            TOL,
        );
        let (a, b) = (c(alpha as f64, 0.0), c(beta as f64, 0.0));
        let rhs = qgamma(b, q2, TOL).unwrap() * qgamma(a, q2, TOL).unwrap() / qgamma(a + b, q2, TOL).unwrap();
        prop_assert!(rel(lhs, rhs) <= 1e-12, "{lhs} vs {rhs}");
    }
}

mod common;

use common::{finite, poly};
use proptest::prelude::*;
use qdisc::quad::{boundary_restrict, boundary_restrict_polar, mu, nu_alpha, nu_alpha_trace, stokes_check};
use qdisc::{DiffForm, PolarFunction, QContext};

const Q: f64 = 0.5;

fn ctx() -> QContext {
    QContext::new(Q, 48, 8).unwrap()
}

proptest! {
    #[test]
    fn mu_is_positive(f in poly(Q, 4, 5)) {
        let g = f.involution().multiply(&f);
        let v = mu(&PolarFunction::from_normal(&g, &ctx()).unwrap()).unwrap();
        prop_assert!(v.re >= -1e-14);
        prop_assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1.0));
    }

    #[test]
    fn nu_alpha_routes_agree(f in finite(ctx(), 3, 10), alpha in 0.25f64..4.0) {
        let a = nu_alpha(&f, alpha).unwrap();
        let b = nu_alpha_trace(&f, alpha).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(f.max_abs()));
    }

    #[test]
    fn stokes_on_degree_six(f in poly(Q, 6, 6)) {
        prop_assert!(stokes_check(&DiffForm::dz_left(&f), &ctx()).unwrap() <= 1e-12);
    }

    #[test]
    fn boundary_values_from_samples(f in poly(Q, 6, 6)) {
        let direct = boundary_restrict(&f);
        let polar = boundary_restrict_polar(&PolarFunction::from_normal(&f, &ctx()).unwrap());
        prop_assert!(direct.max_abs_diff(&polar) <= 1e-12);
    }
}

mod common;

use common::{c, poly};
use proptest::prelude::*;
use qdisc::{NormalPoly, PolarFunction, QContext, TensorPoly};

const Q: f64 = 0.5;

fn scaled_diff(a: &NormalPoly, b: &NormalPoly) -> f64 {
    a.max_abs_diff(b) / a.max_abs().max(1.0)
}

proptest! {
    #[test]
    fn multiplication_is_associative(f in poly(Q, 4, 5), g in poly(Q, 4, 5), h in poly(Q, 4, 5)) {
        let lhs = f.multiply(&g).multiply(&h);
        prop_assert!(scaled_diff(&lhs, &f.multiply(&g.multiply(&h))) <= 1e-12);
    }

    #[test]
    fn involution_reverses_products(f in poly(Q, 4, 5), g in poly(Q, 4, 5)) {
        let lhs = f.multiply(&g).involution();
        prop_assert!(scaled_diff(&lhs, &g.involution().multiply(&f.involution())) <= 1e-12);
        prop_assert!(f.involution().involution().max_abs_diff(&f) == 0.0);
    }

    #[test]
    fn polar_round_trip(f in (0.3f64..0.9).prop_flat_map(|q| poly(q, 6, 6))) {
        let ctx = QContext::new(f.q(), 24, 6).unwrap();
        let back = PolarFunction::from_normal(&f, &ctx).unwrap().to_normal().unwrap();
        prop_assert!(scaled_diff(&back, &f) <= 1e-12);
    }

    #[test]
    fn braces_restrict_to_products(f in poly(Q, 3, 4), g in poly(Q, 3, 4)) {
        let one = NormalPoly::one(Q);
        let second = TensorPoly::pure(&one, &f).braces(&TensorPoly::pure(&one, &g));
        prop_assert!(second.max_abs_diff(&TensorPoly::pure(&one, &f.multiply(&g))) <= 1e-12);
        let first = TensorPoly::pure(&f, &one).braces(&TensorPoly::pure(&g, &one));
        prop_assert!(first.max_abs_diff(&TensorPoly::pure(&g.multiply(&f), &one)) <= 1e-12);
    }
}

#[test]
fn y_commutation() {
    for q in [0.2, 0.5, 0.9] {
        let (z, zs, y) = (NormalPoly::z(q), NormalPoly::z_star(q), NormalPoly::y(q));
        let a = &zs.multiply(&y) - &y.multiply(&zs).scale(c(q * q, 0.0));
        let b = &z.multiply(&y) - &y.multiply(&z).scale(c(1.0 / (q * q), 0.0));
        assert!(a.max_abs() < 1e-15 && b.max_abs() < 1e-14, "q = {q}");
    }
}

mod common;

use common::dyadic_poly;
use proptest::prelude::*;
use qdisc::berezin::exact::{ExactAlgebra, ExactPoly};
use qdisc::berezin::{c_k_extract, star_product};
use qdisc::NormalPoly;

const Q: f64 = 0.5;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unit_is_preserved(f in dyadic_poly(Q, 3, 4), k in 1usize..=3) {
        let one = NormalPoly::one(Q);
        prop_assert!(c_k_extract(&one, &f, k).unwrap().is_zero());
        prop_assert!(c_k_extract(&f, &one, k).unwrap().is_zero());
    }

    #[test]
    fn coefficients_fit_the_template(f in dyadic_poly(Q, 3, 3), g in dyadic_poly(Q, 3, 3), k in 1usize..=3) {
        prop_assert!(c_k_extract(&f, &g, k).is_ok());
    }

    #[test]
    fn zeroth_order_is_the_product(f in dyadic_poly(Q, 3, 3), g in dyadic_poly(Q, 3, 3)) {
        let s = star_product(&f, &g, 1).unwrap();
        prop_assert!(s.coeff(0).unwrap().max_abs_diff(&f.multiply(&g)) <= 1e-12);
    }

    #[test]
    fn exact_associativity(f in dyadic_poly(Q, 2, 2), g in dyadic_poly(Q, 2, 2), h in dyadic_poly(Q, 2, 2)) {
        let mut alg = ExactAlgebra::new(Q).unwrap();
        let (a, b, c) = (ExactPoly::from_normal(&f).unwrap(), ExactPoly::from_normal(&g).unwrap(), ExactPoly::from_normal(&h).unwrap());
        for p in alg.associator(&a, &b, &c, 2) {
            prop_assert!(p.is_zero());
        }
    }
}

mod common;

use common::poly;
use proptest::prelude::*;
use qdisc::ncpoly::PolarFunction;
use qdisc::quad::nu_alpha;
use qdisc::rep::contraction_defect;
use qdisc::{Complex, NormalPoly, QContext, RepMatrix};

proptest! {
    #[test]
    fn contraction(q in 0.05f64..0.95, dim in 2usize..40) {
        prop_assert!(contraction_defect(q, dim) >= -1e-12);
    }

    #[test]
    fn coordinate_systems_interconvert(f in (0.3f64..0.8).prop_flat_map(|q| poly(q, 5, 6))) {
        let dim = 16;
        let ctx = QContext::new(f.q(), dim, 8).unwrap();
        let t = RepMatrix::from_normal(&f, dim);
        let scale = f.max_abs().max(1.0);
        // a_jk -> l_mn -> a_jk
        prop_assert!(t.to_normal(5).unwrap().max_abs_diff(&f) <= 1e-10 * scale);
        // polar samples -> l_mn agrees with a_jk -> l_mn
        let polar = PolarFunction::from_normal(&f, &ctx).unwrap();
        let t2 = RepMatrix::from_polar(&polar, dim);
        prop_assert!((t.matrix() - t2.matrix()).camax() <= 1e-10 * scale);
        // l_mn -> polar samples on the levels the matrix sees in full
        let back = t.to_polar(&ctx).unwrap();
        for m in polar.mode_indices() {
            let (a, b) = (polar.samples(m), back.samples(m));
            for n in 0..dim - m.unsigned_abs() as usize {
                prop_assert!((a[n] - b[n]).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn monomials_are_orthogonal(q in 0.3f64..0.8, alpha in 0.5f64..4.0) {
        let ctx = QContext::new(q, 64, 8).unwrap();
        let one = Complex::new(1.0, 0.0);
        for m in 0..5 {
            for n in 0..5 {
                let g = NormalPoly::monomial(q, 0, m, one).multiply(&NormalPoly::monomial(q, n, 0, one));
                let v = nu_alpha(&PolarFunction::from_normal(&g, &ctx).unwrap(), alpha).unwrap();
                if m == n {
                    prop_assert!(v.re > 0.0 && v.im.abs() <= 1e-14);
                } else {
                    prop_assert!(v.norm() <= 1e-14);
                }
            }
        }
    }
}

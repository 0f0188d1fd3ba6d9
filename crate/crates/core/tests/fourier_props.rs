mod common;

use common::finite;
use proptest::prelude::*;
use qdisc::fourier::{fourier_forward, parseval_defect};
use qdisc::{NormalPoly, PolarFunction, QContext};

fn ctx() -> QContext {
    QContext::new(0.5, 64, 16).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weight_is_preserved(f in finite(ctx(), 5, 8)) {
        let m = f.mode_indices()[0];
        let g = fourier_forward(&f, 32).unwrap();
        for (k, vals) in &g.grid {
            if *k != m {
                prop_assert!(vals.iter().all(|v| v.norm() == 0.0), "mode {k} leaked from {m}");
            }
        }
    }

    #[test]
    fn parseval_on_finite_pairs(u in finite(ctx(), 2, 6), v in finite(ctx(), 2, 6)) {
        prop_assume!(u.mode_indices() == v.mode_indices());
        prop_assert!(parseval_defect(&u, &v, 128).unwrap() <= 1e-4);
    }
}

#[test]
fn polynomial_weights() {
    let ctx = ctx();
    for (s, m) in [("z^2 y^2", 2), ("y^2 z*^3", -3), ("y^3", 0)] {
        let f = PolarFunction::from_normal(&NormalPoly::parse(s, &ctx).unwrap(), &ctx).unwrap();
        let g = fourier_forward(&f, 32).unwrap();
        assert_eq!(g.grid.keys().copied().collect::<Vec<_>>(), vec![m], "{s}");
    }
}

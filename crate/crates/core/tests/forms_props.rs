mod common;

use common::{c, poly};
use proptest::prelude::*;
use qdisc::{DiffForm, NormalPoly};

const Q: f64 = 0.5;

fn form() -> impl Strategy<Value = DiffForm> {
    (poly(Q, 4, 4), poly(Q, 4, 4), poly(Q, 4, 4), poly(Q, 4, 4)).prop_map(|(a, b, d, e)| DiffForm {
        f00: a,
        f10: b,
        f01: d,
        f11: e,
    })
}

fn one_form() -> impl Strategy<Value = DiffForm> {
    (poly(Q, 4, 4), poly(Q, 4, 4)).prop_map(|(b, d)| DiffForm {
        f10: b,
        f01: d,
        ..DiffForm::zero(Q)
    })
}

fn diff(a: &DiffForm, b: &DiffForm) -> f64 {
    a.add(&b.scale(c(-1.0, 0.0))).max_abs() / a.max_abs().max(1.0)
}

proptest! {
    #[test]
    fn differentials_square_to_zero(w in form()) {
        let (del, dbar) = w.differentials();
        prop_assert!(del.differentials().0.max_abs() <= 1e-12);
        prop_assert!(dbar.differentials().1.max_abs() <= 1e-12);
        let mixed = del.differentials().1.add(&dbar.differentials().0);
        prop_assert!(mixed.max_abs() <= 1e-12 * w.max_abs().max(1.0));
        prop_assert!(w.d().d().max_abs() <= 1e-12 * w.max_abs().max(1.0));
    }

    #[test]
    fn letterwise_differentials_match(w in one_form(), f in poly(Q, 5, 5)) {
        let w = DiffForm { f00: f, ..w };
        let (a, b) = w.differentials();
        let (x, y) = w.leibniz_differentials();
        prop_assert!(diff(&a, &x) <= 1e-12 && diff(&b, &y) <= 1e-12);
    }

    #[test]
    fn graded_leibniz(f in poly(Q, 3, 3), w in form(), v in one_form(), g in poly(Q, 3, 3)) {
        let f = DiffForm::function(&f);
        let lhs = f.multiply(&w).d();
        let rhs = f.d().multiply(&w).add(&f.multiply(&w.d()));
        prop_assert!(diff(&lhs, &rhs) <= 1e-12);
        let g = DiffForm::function(&g);
        let lhs = v.multiply(&g).d();
        let rhs = v.d().multiply(&g).add(&v.multiply(&g.d()).scale(c(-1.0, 0.0)));
        prop_assert!(diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn involution_of_forms(w in form(), v in form()) {
        let lhs = w.multiply(&v).involution();
        let rhs = v.involution().multiply(&w.involution());
        prop_assert!(diff(&lhs, &rhs) <= 1e-12);
    }
}

#[test]
fn differentials_commute_with_y() {
    let y = DiffForm::function(&NormalPoly::y(Q));
    for d in [DiffForm::dz(Q), DiffForm::dz_star(Q)] {
        assert!(d.multiply(&y).add(&y.multiply(&d).scale(c(-1.0, 0.0))).is_zero());
    }
}

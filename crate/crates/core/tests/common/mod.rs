#![allow(dead_code)]

use proptest::prelude::*;
use qdisc::{Complex, NormalPoly, PolarFunction, QContext};

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn complex(r: f64) -> impl Strategy<Value = Complex> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

/// Polynomials of total degree at most `deg` with up to `terms` monomials.
pub fn poly(q: f64, deg: usize, terms: usize) -> impl Strategy<Value = NormalPoly> {
    prop::collection::vec((0..=deg, 0..=deg, complex(1.0)), 1..=terms).prop_map(move |ts| {
        let mut f = NormalPoly::zero(q);
        for (j, k, v) in ts {
            let k = k.min(deg - j);
            f.add_term(j, k, v);
        }
        f
    })
}

/// Polynomials whose monomials have dyadic coefficients, exact in binary.
pub fn dyadic_poly(q: f64, deg: usize, terms: usize) -> impl Strategy<Value = NormalPoly> {
    prop::collection::vec((0..=deg, 0..=deg, -8i32..=8, -8i32..=8), 1..=terms).prop_map(move |ts| {
        let mut f = NormalPoly::zero(q);
        for (j, k, a, b) in ts {
            f.add_term(j, k.min(deg - j), c(a as f64 / 4.0, b as f64 / 4.0));
        }
        f
    })
}

/// A single angular mode with samples on the first `support` levels only.
pub fn finite(ctx: QContext, modes: i64, support: usize) -> impl Strategy<Value = PolarFunction> {
    (-modes..=modes, prop::collection::vec(complex(1.0), 1..=support)).prop_map(move |(m, vals)| {
        let mut s = vec![c(0.0, 0.0); ctx.radial_levels];
        s[..vals.len()].copy_from_slice(&vals);
        PolarFunction::from_samples(&ctx, m, s).unwrap()
    })
}

pub fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

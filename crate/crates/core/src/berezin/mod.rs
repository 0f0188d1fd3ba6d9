//! The Berezin star product `f1 * f2 = (1 - t) Σ_j t^j m(p_j(□̃) f1 ⊗ f2)`.
//!
//! `□̃ = q^{-2}(1 - (1 + q^{-2}) z*⊗z + q^{-2} z*²⊗z²) ∂^{(r)}/∂z* ⊗ ∂^{(l)}/∂z`
//! acts on `Pol(C)_q^op ⊗ Pol(C)_q`. The prefactor multiplies from the left
//! in the braces product, so after `m` it sits between the two derivatives.
//!
//! [`box_tilde`] and [`p_polynomial`] work in floating point. The series
//! coefficients `C_k` are assembled over exact rationals by [`exact`].

pub mod exact;

use crate::error::{Error, Result};
use crate::forms::{dz_left_derivative, dz_star_right_derivative};
use crate::ncpoly::{NormalPoly, TensorPoly};
use crate::qspecial::{qpoch_real, Complex};
use crate::rep::BargmannOps;
use exact::{ExactAlgebra, ExactPoly, Rational};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `□̃` on a tensor.
pub fn box_tilde(tp: &TensorPoly) -> TensorPoly {
    let q = tp.q();
    let r = 1.0 / (q * q);
    let d = tp.map_factors(dz_star_right_derivative, dz_left_derivative);
    let mut p = TensorPoly::zero(q);
    for (s, c) in [r, -r * (1.0 + r), r * r].into_iter().enumerate() {
        let a = NormalPoly::monomial(q, 0, s, real(1.0));
        let b = NormalPoly::monomial(q, s, 0, real(1.0));
        p.add_pure(&a, &b, real(c));
    }
    p.braces(&d)
}

/// `(q^{-2j}; q^2)_k q^{2k} / (q^2; q^2)_k^2`.
pub fn p_coefficient(q: f64, j: usize, k: usize) -> f64 {
    let q2 = q * q;
    let pk = qpoch_real(q2, q2, k);
    qpoch_real(q2.powi(-(j as i32)), q2, k) * q2.powi(k as i32) / (pk * pk)
}

/// `p_j(□̃) X`. The `k`-th product
/// `Π_{i<k}(1 - q^{2i}((1 - q^2)^2 □̃ + 1 + q^2) + q^{4i+2})` is built from the
/// `(k-1)`-th, since all factors are polynomials in `□̃`.
pub fn p_polynomial(j: usize, operand: &TensorPoly) -> TensorPoly {
    let q = operand.q();
    let q2 = q * q;
    let mut x = operand.clone();
    let mut out = x.scale(real(p_coefficient(q, j, 0)));
    for k in 1..=j {
        let qi = q2.powi(k as i32 - 1);
        let alpha = 1.0 - qi * (1.0 + q2) + qi * qi * q2;
        let beta = -qi * (1.0 - q2) * (1.0 - q2);
        x = x.scale(real(alpha)).add(&box_tilde(&x).scale(real(beta)));
        out = out.add(&x.scale(real(p_coefficient(q, j, k))));
    }
    out
}

/// Coefficients `C_0, ..., C_K` of `t^k` in a truncated formal series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormalSeries {
    pub coeffs: Vec<NormalPoly>,
}

impl FormalSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Option<&NormalPoly> {
        self.coeffs.get(k)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| serde_json::json!({ "order": k, "coeff": c }))
            .collect();
        serde_json::Value::Array(items)
    }
}

fn exact_coefficients(f1: &NormalPoly, f2: &NormalPoly, order: usize) -> Result<Vec<ExactPoly>> {
    let mut alg = ExactAlgebra::new(f1.q())?;
    Ok(alg.star_coefficients(&ExactPoly::from_normal(f1)?, &ExactPoly::from_normal(f2)?, order))
}

/// `f1 * f2` up to `t^order`, each coefficient rounded once from its exact
/// value.
pub fn star_product(f1: &NormalPoly, f2: &NormalPoly, order: usize) -> Result<FormalSeries> {
    let q = f1.q();
    let coeffs = exact_coefficients(f1, f2, order)?.iter().map(|c| c.to_normal(q)).collect();
    Ok(FormalSeries { coeffs })
}

/// A `q`-bidifferential operator
/// `Σ a_{ijkm} (∂^{(r)}/∂z*)^i f1 · z*^j z^k · (∂^{(l)}/∂z)^m f2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bidifferential {
    pub terms: BTreeMap<(usize, usize, usize, usize), Rational>,
}

impl Bidifferential {
    pub fn identity() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0, 0), Rational::from_integer(1.into()));
        Bidifferential { terms }
    }

    fn add_term(&mut self, key: (usize, usize, usize, usize), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn combine(&self, a: &Rational, other: &Self, b: &Rational) -> Self {
        let mut out = Bidifferential { terms: BTreeMap::new() };
        for (&k, c) in &self.terms {
            out.add_term(k, c * a);
        }
        for (&k, c) in &other.terms {
            out.add_term(k, c * b);
        }
        out
    }

    /// `□̃` composed after `self`, by the twisted Leibniz rules
    /// `∂^{(r)}(g z*^j) = q^{-2j} ∂^{(r)}g z*^j + [j] g z*^{j-1}` and
    /// `∂^{(l)}(z^k h) = [k] z^{k-1} h + q^{-2k} z^k ∂^{(l)}h`, `[n] = [n]_{q^{-2}}`.
    pub fn box_tilde(&self, alg: &ExactAlgebra) -> Self {
        let r = alg.q2().recip();
        let pre = alg.prefactor();
        let mut out = Bidifferential { terms: BTreeMap::new() };
        for (&(i, j, k, m), c) in &self.terms {
            let mut left = vec![((i + 1, j), ExactAlgebra::pow(&r, j))];
            if j > 0 {
                left.push(((i, j - 1), alg.number(j)));
            }
            let mut right = vec![((k, m + 1), ExactAlgebra::pow(&r, k))];
            if k > 0 {
                right.push(((k - 1, m), alg.number(k)));
            }
            for ((i2, j2), a) in &left {
                for ((k2, m2), b) in &right {
                    for (s, p) in pre.iter().enumerate() {
                        out.add_term((*i2, j2 + s, k2 + s, *m2), c * a * b * p);
                    }
                }
            }
        }
        out
    }

    /// Largest derivative order applied to either argument.
    pub fn max_order(&self) -> usize {
        self.terms.keys().map(|&(i, _, _, m)| i.max(m)).max().unwrap_or(0)
    }

    pub fn apply(&self, alg: &mut ExactAlgebra, f1: &ExactPoly, f2: &ExactPoly) -> ExactPoly {
        let mut d1 = vec![f1.clone()];
        let mut d2 = vec![f2.clone()];
        for _ in 0..self.max_order() {
            d1.push(alg.dz_star(d1.last().expect("nonempty")));
            d2.push(alg.dz(d2.last().expect("nonempty")));
        }
        let one = Rational::from_integer(1.into());
        let mut out = ExactPoly::zero();
        for (&(i, j, k, m), c) in &self.terms {
            if d1[i].is_zero() || d2[m].is_zero() {
                continue;
            }
            let mid = alg.multiply(&ExactPoly::monomial(0, j, c.clone()), &ExactPoly::monomial(k, 0, one.clone()));
            let left = alg.multiply(&d1[i], &mid);
            out = out.add(&alg.multiply(&left, &d2[m]));
        }
        out
    }
}

/// Templates of `C_0, ..., C_order`.
pub fn bidifferential_templates(q: f64, order: usize) -> Result<Vec<Bidifferential>> {
    let alg = ExactAlgebra::new(q)?;
    let mut xs = vec![Bidifferential::identity()];
    for i in 0..order {
        let (a, b) = alg.factor_shift(i);
        let prev = xs.last().expect("nonempty");
        xs.push(prev.combine(&a, &prev.box_tilde(&alg), &b));
    }
    Ok((0..=order)
        .map(|j| {
            let mut c = Bidifferential { terms: BTreeMap::new() };
            for (k, x) in xs.iter().enumerate().take(j + 1) {
                c = c.combine(&Rational::from_integer(1.into()), x, &alg.star_weight(j, k));
            }
            c
        })
        .collect())
}

/// `C_k(f1, f2)`, checked against its `q`-bidifferential template.
pub fn c_k_extract(f1: &NormalPoly, f2: &NormalPoly, k: usize) -> Result<NormalPoly> {
    let c = exact_coefficients(f1, f2, k)?.swap_remove(k);
    let template = bidifferential_templates(f1.q(), k)?.swap_remove(k);
    if template.max_order() > k {
        return Err(Error::Mismatch(format!("C_{k} uses derivatives of order above {k}")));
    }
    let mut alg = ExactAlgebra::new(f1.q())?;
    let t = template.apply(&mut alg, &ExactPoly::from_normal(f1)?, &ExactPoly::from_normal(f2)?);
    if t != c {
        let d = t.sub(&c).max_abs().to_f64().unwrap_or(f64::INFINITY);
        return Err(Error::Mismatch(format!("C_{k} departs from its bidifferential form by {d:e}")));
    }
    Ok(c.to_normal(f1.q()))
}

/// Largest coefficient of
/// `Σ_{i+k=m} C_i(f1, C_k(f2, f3)) - C_i(C_k(f1, f2), f3)` over `m <= order`,
/// computed exactly.
pub fn associativity_residual(f1: &NormalPoly, f2: &NormalPoly, f3: &NormalPoly, order: usize) -> Result<f64> {
    let mut alg = ExactAlgebra::new(f1.q())?;
    let e = |f: &NormalPoly| ExactPoly::from_normal(f);
    let r = alg.associator(&e(f1)?, &e(f2)?, &e(f3)?, order);
    Ok(r.iter().map(|p| p.max_abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub alpha: f64,
    pub order: usize,
    pub block: usize,
    /// `‖f̂1 f̂2 - Σ_{k<=order} q^{4αk} Ĉ_k‖` on the principal block.
    pub residual: f64,
    /// `q^{4α(order+1)} ‖Ĉ_{order+1}‖`, the expected leading remainder.
    pub leading: f64,
}

/// Compares operator products in `H^2_{q,α}` with the star product at
/// `t = q^{4α}`.
pub fn quantization_oracle(
    f1: &NormalPoly,
    f2: &NormalPoly,
    alpha: f64,
    order: usize,
    dim: usize,
) -> Result<QuantizationReport> {
    let q = f1.q();
    let ops = BargmannOps::new(alpha, q, dim)?;
    let d = f1.multiply(f2).degree();
    if d >= dim {
        return Err(Error::InvalidContext(format!("dimension {dim} too small for degree {d}")));
    }
    let block = dim - d;
    let series = star_product(f1, f2, order + 1)?;
    let t = q.powf(4.0 * alpha);
    let mut m = ops.quantize(f1) * ops.quantize(f2);
    for k in 0..=order {
        m -= ops.quantize(&series.coeffs[k]) * real(t.powi(k as i32));
    }
    let next = ops.quantize(&series.coeffs[order + 1]) * real(t.powi(order as i32 + 1));
    Ok(QuantizationReport {
        alpha,
        order,
        block,
        residual: ops.operator_norm(&m, block),
        leading: ops.operator_norm(&next, block),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QContext;

    const Q: f64 = 0.5;

    fn p(s: &str) -> NormalPoly {
        NormalPoly::parse(s, &QContext::new(Q, 8, 8).unwrap()).unwrap()
    }

    #[test]
    fn box_tilde_examples() {
        assert!(box_tilde(&TensorPoly::one(Q)).is_zero());
        let x = TensorPoly::pure(&p("z*"), &p("z"));
        let b = box_tilde(&x).multiply_out();
        let r = 1.0 / (Q * Q);
        let want = p("1 - 5 z* z + 4 z*^2 z^2").scale(real(r));
        assert!(b.max_abs_diff(&want) < 1e-13);
        // 1 - (1+q^-2) z*z + q^-2 z*^2 z^2 = (1 - z*z)^2
        assert!(want.max_abs_diff(&p("(1 - z* z)^2").scale(real(r))) < 1e-13);
    }

    #[test]
    fn p_polynomials() {
        let x = TensorPoly::pure(&p("z*^2 z"), &p("z^2 z*"));
        assert!(p_polynomial(0, &x).max_abs_diff(&x) < 1e-15);
        let d = p_polynomial(1, &x).add(&x.scale(real(-1.0))).multiply_out();
        let want = box_tilde(&x).multiply_out().scale(real(1.0 - Q * Q));
        assert!(d.max_abs_diff(&want) < 1e-12);
        assert_eq!(p_coefficient(Q, 2, 3), 0.0);
    }

    #[test]
    fn first_order_term() {
        for (a, b) in [("z*", "z"), ("z*^2 z", "z^3"), ("z^2 z*^2", "z z*")] {
            let (f1, f2) = (p(a), p(b));
            let s = star_product(&f1, &f2, 2).unwrap();
            assert!(s.coeffs[0].max_abs_diff(&f1.multiply(&f2)) < 1e-13);
            let want = dz_star_right_derivative(&f1)
                .multiply(&p("(1 - z* z)^2"))
                .multiply(&dz_left_derivative(&f2))
                .scale(real(1.0 / (Q * Q) - 1.0));
            assert!(s.coeffs[1].max_abs_diff(&want) < 1e-12, "{a}, {b}");
        }
        let c1 = c_k_extract(&p("z*"), &p("z"), 1).unwrap();
        assert!(c1.max_abs_diff(&p("(1 - z* z)^2").scale(real(1.0 / (Q * Q) - 1.0))) < 1e-12);
    }

    #[test]
    fn units_and_shape() {
        let f = p("z^2 z* + 3 z*^2 z^2 - z");
        for k in 1..=3 {
            assert!(c_k_extract(&NormalPoly::one(Q), &f, k).unwrap().is_zero());
            assert!(c_k_extract(&f, &NormalPoly::one(Q), k).unwrap().is_zero());
            c_k_extract(&f, &p("z*^2 z^3 + i z"), k).unwrap();
        }
        let t = bidifferential_templates(Q, 3).unwrap();
        for (k, b) in t.iter().enumerate() {
            assert_eq!(b.max_order(), k);
        }
    }

    #[test]
    fn formal_associativity() {
        let r = associativity_residual(&p("z*^2"), &p("z z*"), &p("z^2 + 2 z*"), 3).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn series_json() {
        let s = star_product(&p("z*"), &p("z"), 1).unwrap();
        let j = s.to_json();
        assert_eq!(j[1]["order"], 1);
        let back: FormalSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn quantization_scaling() {
        for (a, b) in [("z*", "z"), ("z*^2 z", "z^2 + z*")] {
            let (f1, f2) = (p(a), p(b));
            for order in 0..=1 {
                let r: Vec<f64> = [2.0, 3.0, 4.0]
                    .iter()
                    .map(|&al| quantization_oracle(&f1, &f2, al, order, 24).unwrap().residual)
                    .collect();
                let expect = Q.powi(4 * (order as i32 + 1));
                for w in r.windows(2) {
                    assert!((w[1] / w[0] / expect - 1.0).abs() < 0.01, "{a}, {b}, K = {order}");
                }
            }
        }
        let k0 = quantization_oracle(&p("z*"), &p("z"), 3.0, 0, 24).unwrap();
        assert!((k0.residual / k0.leading - 1.0).abs() < 1e-3);
        let one = NormalPoly::one(Q);
        assert!(quantization_oracle(&one, &one, 2.0, 1, 12).unwrap().residual < 1e-14);
    }
}

//! `Pol(C)_q^op ⊗ Pol(C)_q` with the braces product
//! `(a ⊗ b)(c ⊗ d) = (c a) ⊗ (b d)`.

use super::{NormalPoly, ReorderTable};
use crate::qspecial::Complex;
use std::collections::BTreeMap;

type Key = ((usize, usize), (usize, usize));

/// Finite sum of pure tensors of normal-ordered monomials. The first factor
/// is stored as an ordinary polynomial and multiplies in reversed order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorPoly {
    q: f64,
    coeffs: BTreeMap<Key, Complex>,
}

impl TensorPoly {
    pub fn zero(q: f64) -> Self {
        TensorPoly {
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(q: f64) -> Self {
        Self::pure(&NormalPoly::one(q), &NormalPoly::one(q))
    }

    /// `g ⊗ h`.
    pub fn pure(g: &NormalPoly, h: &NormalPoly) -> Self {
        let mut t = Self::zero(g.q());
        t.add_pure(g, h, Complex::new(1.0, 0.0));
        t
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn add_pure(&mut self, g: &NormalPoly, h: &NormalPoly, c: Complex) {
        for (a, x) in g.terms() {
            for (b, y) in h.terms() {
                self.add_term(a, b, c * x * y);
            }
        }
    }

    fn add_term(&mut self, a: (usize, usize), b: (usize, usize), c: Complex) {
        if c == Complex::default() {
            return;
        }
        let e = self.coeffs.entry((a, b)).or_default();
        *e += c;
        if *e == Complex::default() {
            self.coeffs.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Key, Complex)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), &c) in &other.coeffs {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = Self::zero(self.q);
        for (&(a, b), &x) in &self.coeffs {
            out.add_term(a, b, x * c);
        }
        out
    }

    /// Braces product.
    pub fn braces(&self, other: &Self) -> Self {
        let mut table = ReorderTable::new(self.q);
        let mut out = Self::zero(self.q);
        for (&(a1, b1), &x) in &self.coeffs {
            for (&(a2, b2), &y) in &other.coeffs {
                let first = mono(self.q, a2).multiply_with(&mono(self.q, a1), &mut table);
                let second = mono(self.q, b1).multiply_with(&mono(self.q, b2), &mut table);
                out.add_pure(&first, &second, x * y);
            }
        }
        out
    }

    /// Applies linear maps to the two factors of every pure tensor.
    pub fn map_factors<F, G>(&self, f: F, g: G) -> Self
    where
        F: Fn(&NormalPoly) -> NormalPoly,
        G: Fn(&NormalPoly) -> NormalPoly,
    {
        let mut out = Self::zero(self.q);
        for (&(a, b), &c) in &self.coeffs {
            out.add_pure(&f(&mono(self.q, a)), &g(&mono(self.q, b)), c);
        }
        out
    }

    /// Multiplication map `a ⊗ b -> a b`.
    pub fn multiply_out(&self) -> NormalPoly {
        let mut table = ReorderTable::new(self.q);
        let mut out = NormalPoly::zero(self.q);
        for (&(a, b), &c) in &self.coeffs {
            let p = mono(self.q, a).multiply_with(&mono(self.q, b), &mut table);
            out = &out + &p.scale(c);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let diff = self.add(&other.scale(Complex::new(-1.0, 0.0)));
        diff.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn mono(q: f64, (j, k): (usize, usize)) -> NormalPoly {
    NormalPoly::monomial(q, j, k, Complex::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: f64 = 0.5;

    #[test]
    fn braces_relation() {
        // {z z*} = q^2 {z* z} + 1 - q^2 in the first factor
        let z = TensorPoly::pure(&NormalPoly::z(Q), &NormalPoly::one(Q));
        let zs = TensorPoly::pure(&NormalPoly::z_star(Q), &NormalPoly::one(Q));
        let lhs = z.braces(&zs);
        let rhs = zs
            .braces(&z)
            .scale(Complex::new(Q * Q, 0.0))
            .add(&TensorPoly::one(Q).scale(Complex::new(1.0 - Q * Q, 0.0)));
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn factors_reproduce_products() {
        let f = NormalPoly::parse("z^2 z* + 3 z*", &crate::QContext::new(Q, 4, 4).unwrap()).unwrap();
        let g = NormalPoly::parse("z* z^2 - y", &crate::QContext::new(Q, 4, 4).unwrap()).unwrap();
        let one = NormalPoly::one(Q);
        let second = TensorPoly::pure(&one, &f).braces(&TensorPoly::pure(&one, &g));
        assert!(second.max_abs_diff(&TensorPoly::pure(&one, &f.multiply(&g))) < 1e-14);
        let first = TensorPoly::pure(&f, &one).braces(&TensorPoly::pure(&g, &one));
        assert!(first.max_abs_diff(&TensorPoly::pure(&g.multiply(&f), &one)) < 1e-14);
    }
}

//! The algebra `Pol(C)_q`: normal-ordered polynomials, the polar
//! decomposition, tensor and kernel constructions, boundary values and an
//! expression parser.

mod boundary;
mod kernel;
mod parse;
mod polar;
mod tensor;

pub use boundary::BoundaryPoly;
pub use kernel::{green_coefficient, poisson_coefficient, BiKernel, BiMonomial, KernelSpec, Measure};
pub use parse::{parse_expr, ParseOptions, DEFAULT_DEGREE_CAP};
pub use polar::{trace_pairing, PolarFunction, Radial, YPoly};
pub use tensor::TensorPoly;

use crate::error::Result;
use crate::qspecial::{Complex, QContext};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element `Σ a_{jk} z^j z*^k` of `Pol(C)_q` in normal order.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalPoly {
    q: f64,
    coeffs: BTreeMap<(usize, usize), Complex>,
}

/// Coefficients `w_i` of `z*^b z^c = Σ_i w_i z^{c-i} z*^{b-i}`.
#[derive(Debug, Clone)]
pub(crate) struct ReorderTable {
    q2: f64,
    cache: HashMap<(usize, usize), Vec<f64>>,
}

impl ReorderTable {
    pub(crate) fn new(q: f64) -> Self {
        ReorderTable {
            q2: q * q,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, b: usize, c: usize) -> Vec<f64> {
        if let Some(w) = self.cache.get(&(b, c)) {
            return w.clone();
        }
        let w = if b == 0 || c == 0 {
            vec![1.0]
        } else {
            let q2c = self.q2.powi(c as i32);
            let upper = self.get(b - 1, c);
            let lower = self.get(b - 1, c - 1);
            let len = b.min(c) + 1;
            let mut w = vec![0.0; len];
            for (i, v) in upper.iter().enumerate() {
                w[i] += q2c * v;
            }
            for (i, v) in lower.iter().enumerate() {
                w[i + 1] += (1.0 - q2c) * v;
            }
            w
        };
        self.cache.insert((b, c), w.clone());
        w
    }
}

impl NormalPoly {
    pub fn zero(q: f64) -> Self {
        NormalPoly {
            q,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(q: f64, c: Complex) -> Self {
        Self::monomial(q, 0, 0, c)
    }

    pub fn one(q: f64) -> Self {
        Self::constant(q, Complex::new(1.0, 0.0))
    }

    /// `c z^j z*^k`.
    pub fn monomial(q: f64, j: usize, k: usize, c: Complex) -> Self {
        let mut p = Self::zero(q);
        p.add_term(j, k, c);
        p
    }

    pub fn z(q: f64) -> Self {
        Self::monomial(q, 1, 0, Complex::new(1.0, 0.0))
    }

    pub fn z_star(q: f64) -> Self {
        Self::monomial(q, 0, 1, Complex::new(1.0, 0.0))
    }

    /// `y = 1 - z z*`.
    pub fn y(q: f64) -> Self {
        let mut p = Self::one(q);
        p.add_term(1, 1, Complex::new(-1.0, 0.0));
        p
    }

    pub fn parse(text: &str, ctx: &QContext) -> Result<Self> {
        parse_expr(text, ctx.q, &ParseOptions::default())
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coeff(&self, j: usize, k: usize) -> Complex {
        self.coeffs.get(&(j, k)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex)> + '_ {
        self.coeffs.iter().map(|(&jk, &c)| (jk, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree `max (j + k)`; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|&(j, k)| j + k).max().unwrap_or(0)
    }

    /// Largest `|j - k|` among the terms.
    pub fn angular_degree(&self) -> usize {
        self.coeffs.keys().map(|&(j, k)| j.abs_diff(k)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, j: usize, k: usize, c: Complex) {
        if c == Complex::default() {
            return;
        }
        let e = self.coeffs.entry((j, k)).or_default();
        *e += c;
        if *e == Complex::default() {
            self.coeffs.remove(&(j, k));
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = Self::zero(self.q);
        for (&(j, k), &a) in &self.coeffs {
            out.add_term(j, k, a * c);
        }
        out
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        NormalPoly {
            q: self.q,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other)
            .coeffs
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Product in normal order, rewriting `z* z -> q^2 z z* + 1 - q^2`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut table = ReorderTable::new(self.q);
        self.multiply_with(other, &mut table)
    }

    pub(crate) fn multiply_with(&self, other: &Self, table: &mut ReorderTable) -> Self {
        let mut out = Self::zero(self.q);
        for (&(a, b), &x) in &self.coeffs {
            for (&(c, d), &y) in &other.coeffs {
                let w = table.get(b, c);
                for (i, wi) in w.iter().enumerate() {
                    out.add_term(a + c - i, b + d - i, x * y * *wi);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut table = ReorderTable::new(self.q);
        let mut acc = Self::one(self.q);
        for _ in 0..n {
            acc = acc.multiply_with(self, &mut table);
        }
        acc
    }

    /// The involution `(z^j z*^k)* = z^k z*^j` with conjugated coefficients.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero(self.q);
        for (&(j, k), &c) in &self.coeffs {
            out.add_term(k, j, c.conj());
        }
        out
    }

    /// Commutator-free substitution `z^j z*^k -> f(j, k)` summed with the
    /// coefficients, used for evaluating homomorphisms and linear maps.
    pub fn map_terms<T, F>(&self, zero: T, mut f: F) -> T
    where
        T: Add<Output = T>,
        F: FnMut(usize, usize, Complex) -> T,
    {
        let mut acc = zero;
        for (&(j, k), &c) in &self.coeffs {
            acc = acc + f(j, k, c);
        }
        acc
    }
}

impl Add for &NormalPoly {
    type Output = NormalPoly;
    fn add(self, rhs: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (&(j, k), &c) in &rhs.coeffs {
            out.add_term(j, k, c);
        }
        out
    }
}

impl Sub for &NormalPoly {
    type Output = NormalPoly;
    fn sub(self, rhs: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (&(j, k), &c) in &rhs.coeffs {
            out.add_term(j, k, -c);
        }
        out
    }
}

impl Neg for &NormalPoly {
    type Output = NormalPoly;
    fn neg(self) -> NormalPoly {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

impl Mul for &NormalPoly {
    type Output = NormalPoly;
    fn mul(self, rhs: &NormalPoly) -> NormalPoly {
        self.multiply(rhs)
    }
}

impl Add for NormalPoly {
    type Output = NormalPoly;
    fn add(self, rhs: NormalPoly) -> NormalPoly {
        &self + &rhs
    }
}

impl Sub for NormalPoly {
    type Output = NormalPoly;
    fn sub(self, rhs: NormalPoly) -> NormalPoly {
        &self - &rhs
    }
}

impl Mul for NormalPoly {
    type Output = NormalPoly;
    fn mul(self, rhs: NormalPoly) -> NormalPoly {
        self.multiply(&rhs)
    }
}

fn format_real(x: f64) -> String {
    let r = format!("{}", x);
    if r.len() > 12 {
        format!("{:.12}", x)
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        r
    }
}

fn format_monomial(j: usize, k: usize) -> String {
    let mut parts = Vec::new();
    match j {
        0 => {}
        1 => parts.push("z".to_string()),
        _ => parts.push(format!("z^{j}")),
    }
    match k {
        0 => {}
        1 => parts.push("z*".to_string()),
        _ => parts.push(format!("z*^{k}")),
    }
    parts.join(" ")
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.coeffs.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        for (idx, (j, k)) in keys.into_iter().enumerate() {
            let c = self.coeffs[&(j, k)];
            let mono = format_monomial(j, k);
            let (negative, body) = if c.im == 0.0 {
                let neg = c.re < 0.0;
                let mag = c.re.abs();
                let body = if mono.is_empty() {
                    format_real(mag)
                } else if mag == 1.0 {
                    mono.clone()
                } else {
                    format!("{} {}", format_real(mag), mono)
                };
                (neg, body)
            } else {
                let coef = format!(
                    "({}{}{}i)",
                    format_real(c.re),
                    if c.im < 0.0 { "-" } else { "+" },
                    format_real(c.im.abs())
                );
                let body = if mono.is_empty() {
                    coef
                } else {
                    format!("{} {}", coef, mono)
                };
                (false, body)
            };
            match (idx, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyTerm {
    j: usize,
    k: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    q: f64,
    terms: Vec<PolyTerm>,
}

impl Serialize for NormalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            q: self.q,
            terms: self
                .coeffs
                .iter()
                .map(|(&(j, k), c)| PolyTerm {
                    j,
                    k,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormalPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut p = NormalPoly::zero(repr.q);
        for t in repr.terms {
            p.add_term(t.j, t.k, Complex::new(t.re, t.im));
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: f64 = 0.5;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn defining_relation() {
        let p = NormalPoly::z_star(Q).multiply(&NormalPoly::z(Q));
        assert_eq!(p.len(), 2);
        assert!((p.coeff(1, 1) - c(Q * Q)).norm() < 1e-16);
        assert!((p.coeff(0, 0) - c(1.0 - Q * Q)).norm() < 1e-16);
    }

    #[test]
    fn reorder_identity() {
        // z* z^m = q^{2m} z^m z* + (1 - q^{2m}) z^{m-1}
        let m = 4;
        let p = NormalPoly::z_star(Q).multiply(&NormalPoly::z(Q).pow(m));
        let q2m = Q.powi(2 * m as i32);
        assert!((p.coeff(m, 1) - c(q2m)).norm() < 1e-15);
        assert!((p.coeff(m - 1, 0) - c(1.0 - q2m)).norm() < 1e-15);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn commutation_with_y() {
        let y = NormalPoly::y(Q);
        let zs = NormalPoly::z_star(Q);
        let z = NormalPoly::z(Q);
        let r1 = &zs.multiply(&y) - &y.multiply(&zs).scale(c(Q * Q));
        let r2 = &z.multiply(&y) - &y.multiply(&z).scale(c(1.0 / (Q * Q)));
        assert!(r1.max_abs() < 1e-15);
        assert!(r2.max_abs() < 1e-14);
    }

    #[test]
    fn involution_basics() {
        let f = NormalPoly::monomial(Q, 2, 1, Complex::new(1.0, 2.0));
        let g = f.involution();
        assert_eq!(g.coeff(1, 2), Complex::new(1.0, -2.0));
        assert_eq!(g.involution(), f);
        assert_eq!(NormalPoly::z(Q).involution(), NormalPoly::z_star(Q));
    }

    #[test]
    fn display_forms() {
        let p = NormalPoly::z_star(Q).multiply(&NormalPoly::z(Q));
        assert_eq!(p.to_string(), "0.25 z z* + 0.75");
        assert_eq!(NormalPoly::one(Q).to_string(), "1");
        assert_eq!(NormalPoly::zero(Q).to_string(), "0");
        assert_eq!(NormalPoly::y(Q).to_string(), "-z z* + 1");
    }

    #[test]
    fn json_round_trip() {
        let p = NormalPoly::y(Q).pow(2);
        let s = serde_json::to_string(&p).unwrap();
        let back: NormalPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}

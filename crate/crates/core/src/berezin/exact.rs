//! `Pol(C)_q` and the star product over exact rationals. Every `f64` is a
//! dyadic rational, so `q` and the coefficients of a [`NormalPoly`] convert
//! without loss and `C_k` is computed without rounding.
//!
//! The floating point route through [`TensorPoly`](crate::TensorPoly) cancels
//! terms of size up to `q^{-2(k+1)d}` for degree `d` arguments, which at
//! `q = 0.5` swamps `f64` already for `k = 3`, `d = 6`.

use crate::error::{Error, Result};
use crate::ncpoly::NormalPoly;
use crate::qspecial::Complex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

pub type Rational = BigRational;
/// Gaussian rational coefficient.
pub type Coeff = num_complex::Complex<Rational>;

type Mono = (usize, usize);

/// `n / d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn to_rational(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidContext(format!("{x} is not finite")))
}

fn real(x: Rational) -> Coeff {
    Coeff::new(x, Rational::zero())
}

/// Polynomial `Σ c_{jk} z^j z*^k` with Gaussian rational coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExactPoly {
    pub terms: BTreeMap<Mono, Coeff>,
}

impl ExactPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Rational::one())
    }

    pub fn monomial(j: usize, k: usize, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term((j, k), real(c));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&m, v) in &self.terms {
            out.add_term(m, v * c);
        }
        out
    }

    /// Largest `|re| + |im|` over the coefficients.
    pub fn max_abs(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.re.abs() + c.im.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Rounds to a floating point polynomial with base `q`.
    pub fn to_normal(&self, q: f64) -> NormalPoly {
        let f = |x: &Rational| x.to_f64().unwrap_or(f64::NAN);
        let mut out = NormalPoly::zero(q);
        for (&(j, k), c) in &self.terms {
            out.add_term(j, k, Complex::new(f(&c.re), f(&c.im)));
        }
        out
    }

    pub fn from_normal(f: &NormalPoly) -> Result<Self> {
        let mut out = Self::zero();
        for ((j, k), c) in f.terms() {
            out.add_term((j, k), Coeff::new(to_rational(c.re)?, to_rational(c.im)?));
        }
        Ok(out)
    }
}

/// Arithmetic of `Pol(C)_q` over the rationals, with a cache of reordering
/// weights.
#[derive(Debug, Clone)]
pub struct ExactAlgebra {
    q2: Rational,
    r: Rational,
    reorder: HashMap<(usize, usize), Vec<Rational>>,
}

impl ExactAlgebra {
    pub fn new(q: f64) -> Result<Self> {
        let q = to_rational(q)?;
        if !(q > Rational::zero() && q < Rational::one()) {
            return Err(Error::InvalidContext("q must lie in (0, 1)".into()));
        }
        let q2 = &q * &q;
        Ok(ExactAlgebra {
            r: q2.recip(),
            q2,
            reorder: HashMap::new(),
        })
    }

    pub fn q2(&self) -> &Rational {
        &self.q2
    }

    pub fn pow(x: &Rational, n: usize) -> Rational {
        num_traits::pow::Pow::pow(x, n)
    }

    /// `[n]_{q^{-2}} = 1 + q^{-2} + ... + q^{-2(n-1)}`.
    pub fn number(&self, n: usize) -> Rational {
        let mut acc = Rational::zero();
        let mut p = Rational::one();
        for _ in 0..n {
            acc += &p;
            p *= &self.r;
        }
        acc
    }

    // z*^b z^c = Σ_i w_i z^{c-i} z*^{b-i}
    fn weights(&mut self, b: usize, c: usize) -> Vec<Rational> {
        if let Some(w) = self.reorder.get(&(b, c)) {
            return w.clone();
        }
        let w = if b == 0 || c == 0 {
            vec![Rational::one()]
        } else {
            let q2c = Self::pow(&self.q2, c);
            let upper = self.weights(b - 1, c);
            let lower = self.weights(b - 1, c - 1);
            let mut w = vec![Rational::zero(); b.min(c) + 1];
            for (i, v) in upper.iter().enumerate() {
                w[i] += &q2c * v;
            }
            let comp = Rational::one() - &q2c;
            for (i, v) in lower.iter().enumerate() {
                w[i + 1] += &comp * v;
            }
            w
        };
        self.reorder.insert((b, c), w.clone());
        w
    }

    pub fn multiply(&mut self, f: &ExactPoly, g: &ExactPoly) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (&(a, b), x) in &f.terms {
            for (&(c, d), y) in &g.terms {
                let xy = x * y;
                for (i, w) in self.weights(b, c).into_iter().enumerate() {
                    out.add_term((a + c - i, b - i + d), &xy * &w);
                }
            }
        }
        out
    }

    /// `∂^{(r)} f/∂z*`.
    pub fn dz_star(&self, f: &ExactPoly) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (&(j, k), c) in &f.terms {
            if k > 0 {
                out.add_term((j, k - 1), c * &self.number(k));
            }
        }
        out
    }

    /// `∂^{(l)} f/∂z`.
    pub fn dz(&self, f: &ExactPoly) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for (&(j, k), c) in &f.terms {
            if j > 0 {
                out.add_term((j - 1, k), c * &self.number(j));
            }
        }
        out
    }

    /// `(a; q^2)_k`.
    pub fn poch(&self, a: &Rational, k: usize) -> Rational {
        let mut p = Rational::one();
        let mut t = a.clone();
        for _ in 0..k {
            p *= Rational::one() - &t;
            t *= &self.q2;
        }
        p
    }

    /// `(q^{-2j}; q^2)_k q^{2k} / (q^2; q^2)_k^2`.
    pub fn p_coefficient(&self, j: usize, k: usize) -> Rational {
        let a = Self::pow(&self.r, j);
        let d = self.poch(&self.q2, k);
        self.poch(&a, k) * Self::pow(&self.q2, k) / (&d * &d)
    }

    /// Weight of `X_k` in `C_j`: `coef(j, k) - coef(j - 1, k)`.
    pub fn star_weight(&self, j: usize, k: usize) -> Rational {
        let mut w = self.p_coefficient(j, k);
        if j > 0 {
            w -= self.p_coefficient(j - 1, k);
        }
        w
    }

    /// `(α_i, β_i)` with `i`-th factor of `p_j` equal to `α_i + β_i □̃`.
    pub fn factor_shift(&self, i: usize) -> (Rational, Rational) {
        let one = Rational::one();
        let qi = Self::pow(&self.q2, i);
        let alpha = &one - &qi * (&one + &self.q2) + &qi * &qi * &self.q2;
        let beta = -(&qi * (&one - &self.q2) * (&one - &self.q2));
        (alpha, beta)
    }

    /// Coefficients `q^{-2}, -q^{-2}(1 + q^{-2}), q^{-4}` of `z*^s ⊗ z^s`.
    pub fn prefactor(&self) -> [Rational; 3] {
        [
            self.r.clone(),
            -(&self.r * (Rational::one() + &self.r)),
            &self.r * &self.r,
        ]
    }

    fn box_tilde(&mut self, x: &Tensor) -> Tensor {
        let pre = self.prefactor();
        let mut out = Tensor::new();
        for ((a, b), c) in x {
            let da = self.dz_star(&ExactPoly::monomial(a.0, a.1, Rational::one()));
            let db = self.dz(&ExactPoly::monomial(b.0, b.1, Rational::one()));
            if da.is_zero() || db.is_zero() {
                continue;
            }
            for (s, p) in pre.iter().enumerate() {
                let left = self.multiply(&da, &ExactPoly::monomial(0, s, Rational::one()));
                let right = self.multiply(&ExactPoly::monomial(s, 0, Rational::one()), &db);
                let cp = c * p;
                for (&m1, u) in &left.terms {
                    for (&m2, v) in &right.terms {
                        add_tensor(&mut out, (m1, m2), &cp * u * v);
                    }
                }
            }
        }
        out
    }

    fn multiply_out(&mut self, x: &Tensor) -> ExactPoly {
        let mut out = ExactPoly::zero();
        for ((a, b), c) in x {
            for (i, w) in self.weights(a.1, b.0).into_iter().enumerate() {
                out.add_term((a.0 + b.0 - i, a.1 - i + b.1), c * &w);
            }
        }
        out
    }

    /// `C_0, ..., C_order` of `f1 * f2`, through
    /// `C_j = Σ_{k<=j} (coef(j, k) - coef(j-1, k)) m(X_k)` with
    /// `X_k = Π_{i<k}(α_i + β_i □̃)(f1 ⊗ f2)`.
    pub fn star_coefficients(&mut self, f1: &ExactPoly, f2: &ExactPoly, order: usize) -> Vec<ExactPoly> {
        let mut x = Tensor::new();
        for (&a, u) in &f1.terms {
            for (&b, v) in &f2.terms {
                add_tensor(&mut x, (a, b), u * v);
            }
        }
        let mut ms = vec![self.multiply_out(&x)];
        for i in 0..order {
            let (alpha, beta) = self.factor_shift(i);
            let bx = self.box_tilde(&x);
            let mut next = Tensor::new();
            for (k, c) in &x {
                add_tensor(&mut next, *k, c * &alpha);
            }
            for (k, c) in &bx {
                add_tensor(&mut next, *k, c * &beta);
            }
            x = next;
            ms.push(self.multiply_out(&x));
        }
        (0..=order)
            .map(|j| {
                let mut c = ExactPoly::zero();
                for (k, m) in ms.iter().enumerate().take(j + 1) {
                    c = c.add(&m.scale(&self.star_weight(j, k)));
                }
                c
            })
            .collect()
    }

    /// `Σ_{i+k=m} C_i(f1, C_k(f2, f3)) - C_i(C_k(f1, f2), f3)` for `m <= order`.
    pub fn associator(&mut self, f1: &ExactPoly, f2: &ExactPoly, f3: &ExactPoly, order: usize) -> Vec<ExactPoly> {
        let right = self.star_coefficients(f2, f3, order);
        let left = self.star_coefficients(f1, f2, order);
        let mut out = vec![ExactPoly::zero(); order + 1];
        for k in 0..=order {
            let a = self.star_coefficients(f1, &right[k], order - k);
            let b = self.star_coefficients(&left[k], f3, order - k);
            for i in 0..=order - k {
                out[i + k] = out[i + k].add(&a[i]).sub(&b[i]);
            }
        }
        out
    }
}

type Tensor = BTreeMap<(Mono, Mono), Coeff>;

fn add_tensor(t: &mut Tensor, k: (Mono, Mono), c: Coeff) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_insert_with(Coeff::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

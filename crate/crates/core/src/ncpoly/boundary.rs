//! Finite Laurent sums `Σ a_m e^{imθ}` on the boundary circle.

use super::NormalPoly;
use crate::qspecial::Complex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryPoly {
    pub laurent: BTreeMap<i64, Complex>,
}

impl BoundaryPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mode(0, Complex::new(1.0, 0.0))
    }

    /// `c e^{imθ}`.
    pub fn mode(m: i64, c: Complex) -> Self {
        let mut b = Self::zero();
        b.add_mode(m, c);
        b
    }

    pub fn add_mode(&mut self, m: i64, c: Complex) {
        if c == Complex::default() {
            return;
        }
        let e = self.laurent.entry(m).or_default();
        *e += c;
        if *e == Complex::default() {
            self.laurent.remove(&m);
        }
    }

    pub fn coeff(&self, m: i64) -> Complex {
        self.laurent.get(&m).copied().unwrap_or_default()
    }

    /// Mean value `∫ f dθ/2π`, the zeroth Fourier coefficient.
    pub fn mean(&self) -> Complex {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, &c) in &other.laurent {
            out.add_mode(m, c);
        }
        out
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = Self::zero();
        for (&m, &a) in &self.laurent {
            out.add_mode(m, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&m, &a) in &self.laurent {
            for (&n, &b) in &other.laurent {
                out.add_mode(m + n, a * b);
            }
        }
        out
    }

    pub fn eval(&self, theta: f64) -> Complex {
        self.laurent
            .iter()
            .map(|(&m, &c)| c * Complex::from_polar(1.0, m as f64 * theta))
            .sum()
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
            .laurent
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Restriction onto the boundary: the homomorphism killing the ideal
    /// generated by `1 - z z*`, i.e. `z^j z*^k -> e^{i(j-k)θ}`.
    pub fn restrict(f: &NormalPoly) -> Self {
        let mut out = Self::zero();
        for ((j, k), c) in f.terms() {
            out.add_mode(j as i64 - k as i64, c);
        }
        out
    }
}

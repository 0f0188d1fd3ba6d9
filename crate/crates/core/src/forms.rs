//! Differential forms `ω = f00 + dz·f10 + f01·dz* + dz·f11·dz*`, the
//! differentials `d = ∂ + ∂̄`, partial derivatives, and the twisted sections
//! `f·v_λ`.
//!
//! Commutation rules: `dz·f = σ(f)·dz`, `dz*·f = σ(f)·dz*` with
//! `σ(z^j z*^k) = q^{2(j-k)} z^j z*^k`, `dz*·dz = -q^2 dz·dz*`,
//! `dz·dz = dz*·dz* = 0`.

use crate::error::Result;
use crate::ncpoly::{NormalPoly, PolarFunction, YPoly};
use crate::qspecial::{q_number, Complex};
use serde::{Deserialize, Serialize};

/// `σ^s`: multiplies `z^j z*^k` by `q^{2s(j-k)}`.
pub fn sigma_pow(f: &NormalPoly, s: i32) -> NormalPoly {
    let q2 = f.q() * f.q();
    let mut out = NormalPoly::zero(f.q());
    for ((j, k), c) in f.terms() {
        out.add_term(j, k, c * q2.powi(s * (j as i32 - k as i32)));
    }
    out
}

pub fn sigma(f: &NormalPoly) -> NormalPoly {
    sigma_pow(f, 1)
}

pub fn sigma_inv(f: &NormalPoly) -> NormalPoly {
    sigma_pow(f, -1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffForm {
    pub f00: NormalPoly,
    pub f10: NormalPoly,
    pub f01: NormalPoly,
    pub f11: NormalPoly,
}

impl DiffForm {
    pub fn zero(q: f64) -> Self {
        let z = NormalPoly::zero(q);
        DiffForm {
            f00: z.clone(),
            f10: z.clone(),
            f01: z.clone(),
            f11: z,
        }
    }

    pub fn function(f: &NormalPoly) -> Self {
        let mut w = Self::zero(f.q());
        w.f00 = f.clone();
        w
    }

    /// `dz·f`.
    pub fn dz_left(f: &NormalPoly) -> Self {
        let mut w = Self::zero(f.q());
        w.f10 = f.clone();
        w
    }

    /// `f·dz*`.
    pub fn dz_star_right(f: &NormalPoly) -> Self {
        let mut w = Self::zero(f.q());
        w.f01 = f.clone();
        w
    }

    /// `dz·f·dz*`.
    pub fn top(f: &NormalPoly) -> Self {
        let mut w = Self::zero(f.q());
        w.f11 = f.clone();
        w
    }

    pub fn dz(q: f64) -> Self {
        Self::dz_left(&NormalPoly::one(q))
    }

    pub fn dz_star(q: f64) -> Self {
        Self::dz_star_right(&NormalPoly::one(q))
    }

    pub fn q(&self) -> f64 {
        self.f00.q()
    }

    pub fn add(&self, o: &Self) -> Self {
        DiffForm {
            f00: &self.f00 + &o.f00,
            f10: &self.f10 + &o.f10,
            f01: &self.f01 + &o.f01,
            f11: &self.f11 + &o.f11,
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        DiffForm {
            f00: self.f00.scale(c),
            f10: self.f10.scale(c),
            f01: self.f01.scale(c),
            f11: self.f11.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f00.is_zero() && self.f10.is_zero() && self.f01.is_zero() && self.f11.is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        [&self.f00, &self.f10, &self.f01, &self.f11]
            .iter()
            .map(|p| p.max_abs())
            .fold(0.0, f64::max)
    }

    /// Components of bidegree `(1, 0)` and `(0, 1)` only.
    pub fn degree_one_part(&self) -> (NormalPoly, NormalPoly) {
        (self.f10.clone(), self.f01.clone())
    }

    /// Product in normal form. Components of bidegree above `(1, 1)` vanish
    /// identically, so the result is always a form of the stated shape.
    pub fn multiply(&self, b: &Self) -> Self {
        let q = self.q();
        let q2 = Complex::new(q * q, 0.0);
        let a = self;
        let f00 = &a.f00 * &b.f00;
        let f10 = &(&sigma_inv(&a.f00) * &b.f10) + &(&a.f10 * &b.f00);
        let f01 = &(&a.f00 * &b.f01) + &(&a.f01 * &sigma(&b.f00));
        let mut f11 = &a.f10 * &b.f01;
        f11 = &f11 - &(&sigma_inv(&a.f01) * &sigma(&b.f10)).scale(q2);
        f11 = &f11 + &(&sigma_inv(&a.f00) * &b.f11);
        f11 = &f11 + &(&a.f11 * &sigma(&b.f00));
        DiffForm { f00, f10, f01, f11 }
    }

    /// `(dz f)* = f* dz*`, `(f dz*)* = dz f*`, `(dz f dz*)* = dz f* dz*`.
    pub fn involution(&self) -> Self {
        DiffForm {
            f00: self.f00.involution(),
            f10: self.f01.involution(),
            f01: self.f10.involution(),
            f11: self.f11.involution(),
        }
    }

    /// `(∂ω, ∂̄ω)` from the closed-form partial derivatives.
    pub fn differentials(&self) -> (Self, Self) {
        let q = self.q();
        let mut del = Self::zero(q);
        del.f10 = dz_left_derivative(&self.f00);
        del.f11 = dz_left_derivative(&self.f01);
        let mut delbar = Self::zero(q);
        delbar.f01 = dz_star_right_derivative(&self.f00);
        delbar.f11 = -&dz_star_right_derivative(&self.f10);
        (del, delbar)
    }

    /// `dω = ∂ω + ∂̄ω`.
    pub fn d(&self) -> Self {
        let (a, b) = self.differentials();
        a.add(&b)
    }

    /// `dω` computed by the graded Leibniz rule letter by letter, with
    /// `d z = dz`, `d z* = dz*`, `d(dz) = d(dz*) = 0`. Returns `(∂ω, ∂̄ω)`.
    pub fn leibniz_differentials(&self) -> (Self, Self) {
        let q = self.q();
        let mut del = Self::zero(q);
        let mut delbar = Self::zero(q);
        for ((j, k), c) in self.f00.terms() {
            let (a, b) = leibniz_monomial(q, j, k);
            del = del.add(&a.scale(c));
            delbar = delbar.add(&b.scale(c));
        }
        // d(dz·g) = -dz·dg and d(g·dz*) = dg·dz*
        for ((j, k), c) in self.f10.terms() {
            let (a, b) = leibniz_monomial(q, j, k);
            let dz = Self::dz(q);
            del = del.add(&dz.multiply(&a).scale(-c));
            delbar = delbar.add(&dz.multiply(&b).scale(-c));
        }
        for ((j, k), c) in self.f01.terms() {
            let (a, b) = leibniz_monomial(q, j, k);
            let dzs = Self::dz_star(q);
            del = del.add(&a.multiply(&dzs).scale(c));
            delbar = delbar.add(&b.multiply(&dzs).scale(c));
        }
        (del, delbar)
    }
}

// (∂, ∂̄) of z^j z*^k as sums over the position of the differentiated letter.
fn leibniz_monomial(q: f64, j: usize, k: usize) -> (DiffForm, DiffForm) {
    let one = Complex::new(1.0, 0.0);
    let mut del = DiffForm::zero(q);
    let mut delbar = DiffForm::zero(q);
    for a in 0..j {
        let left = DiffForm::function(&NormalPoly::monomial(q, a, 0, one));
        let right = DiffForm::function(&NormalPoly::monomial(q, j - 1 - a, k, one));
        del = del.add(&left.multiply(&DiffForm::dz(q)).multiply(&right));
    }
    for a in 0..k {
        let left = DiffForm::function(&NormalPoly::monomial(q, j, a, one));
        let right = DiffForm::function(&NormalPoly::monomial(q, 0, k - 1 - a, one));
        delbar = delbar.add(&left.multiply(&DiffForm::dz_star(q)).multiply(&right));
    }
    (del, delbar)
}

/// `∂^{(l)} f / ∂z`, defined by `∂f = dz·(∂^{(l)} f/∂z)`.
pub fn dz_left_derivative(f: &NormalPoly) -> NormalPoly {
    let qi = 1.0 / (f.q() * f.q());
    let mut out = NormalPoly::zero(f.q());
    for ((j, k), c) in f.terms() {
        if j > 0 {
            out.add_term(j - 1, k, c * q_number(j, qi));
        }
    }
    out
}

/// `∂^{(r)} f / ∂z*`, defined by `∂̄f = (∂^{(r)} f/∂z*)·dz*`.
pub fn dz_star_right_derivative(f: &NormalPoly) -> NormalPoly {
    let qi = 1.0 / (f.q() * f.q());
    let mut out = NormalPoly::zero(f.q());
    for ((j, k), c) in f.terms() {
        if k > 0 {
            out.add_term(j, k - 1, c * q_number(k, qi));
        }
    }
    out
}

/// The four partial derivatives of a function.
#[derive(Debug, Clone, PartialEq)]
pub struct Partials {
    /// `∂^{(l)} f / ∂z`
    pub dz_left: NormalPoly,
    /// `∂^{(r)} f / ∂z`
    pub dz_right: NormalPoly,
    /// `∂^{(l)} f / ∂z*`
    pub dzs_left: NormalPoly,
    /// `∂^{(r)} f / ∂z*`
    pub dzs_right: NormalPoly,
}

/// Extracts the partial derivatives from the normal forms of `∂f`, `∂̄f`.
pub fn partial_derivatives(f: &NormalPoly) -> Partials {
    let (del, delbar) = DiffForm::function(f).differentials();
    Partials {
        dz_right: sigma(&del.f10),
        dz_left: del.f10,
        dzs_left: sigma_inv(&delbar.f01),
        dzs_right: delbar.f01,
    }
}

/// `f·v_λ` (grade 0) or `f·v_λ·dz*` (grade 1), with `z·v_λ = q^{-λ} v_λ·z`,
/// `z*·v_λ = q^λ v_λ·z*` and `dz*·v_λ = q^λ v_λ·dz*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedSection {
    pub grade: u8,
    pub f: NormalPoly,
    pub lambda: f64,
}

impl TwistedSection {
    pub fn new(f: &NormalPoly, lambda: f64) -> Self {
        TwistedSection {
            grade: 0,
            f: f.clone(),
            lambda,
        }
    }

    /// Moves `v_λ` from the right of a polynomial `g` to its left:
    /// `g·v_λ = v_λ·τ(g)` with `τ(z^j z*^k) = q^{λ(j-k)} z^j z*^k`.
    pub fn commute_right_to_left(g: &NormalPoly, lambda: f64) -> NormalPoly {
        let q = g.q();
        let mut out = NormalPoly::zero(q);
        for ((j, k), c) in g.terms() {
            out.add_term(j, k, c * q.powf(lambda * (j as f64 - k as f64)));
        }
        out
    }

    /// `∂̄(f·v_λ)` with `∂̄ v_λ = 0`, returned in the form `g·v_λ·dz*`.
    pub fn dbar(&self) -> Result<TwistedSection> {
        let q = self.f.q();
        let g = dz_star_right_derivative(&self.f).scale(Complex::new(q.powf(self.lambda), 0.0));
        Ok(TwistedSection {
            grade: 1,
            f: g,
            lambda: self.lambda,
        })
    }

    /// The same differential through `∂̄f = dz*·∂^{(l)}f/∂z*`, moving `dz*`
    /// through the coefficient and then past `v_λ`.
    pub fn dbar_left_route(&self) -> TwistedSection {
        let q = self.f.q();
        let left = partial_derivatives(&self.f).dzs_left;
        let g = sigma(&left).scale(Complex::new(q.powf(self.lambda), 0.0));
        TwistedSection {
            grade: 1,
            f: g,
            lambda: self.lambda,
        }
    }
}

// (ψ(n) - ψ(n+1)) / (q^{2n} (1 - q^2))
fn diff_quotient(f: &PolarFunction, m: i64, n: i64) -> Complex {
    let q2 = f.ctx().q2();
    (f.value_at(m, n) - f.value_at(m, n + 1)) / (q2.powi(n as i32) * (1.0 - q2))
}

// (1 - y) Dψ(q^{-2} y) at level n; zero at n = 0.
fn shifted_quotient(f: &PolarFunction, m: i64, n: i64) -> Complex {
    if n == 0 {
        return Complex::default();
    }
    let q2 = f.ctx().q2();
    (1.0 - q2.powi(n as i32)) * diff_quotient(f, m, n - 1)
}

// Closed forms of Dψ and (1 - y) Dψ(q^{-2} y).
fn diff_poly(p: &YPoly, q2: f64) -> YPoly {
    YPoly(
        (1..p.0.len())
            .map(|r| p.0[r] * (1.0 - q2.powi(r as i32)) / (1.0 - q2))
            .collect(),
    )
}

fn shifted_poly(p: &YPoly, q2: f64) -> YPoly {
    diff_poly(p, q2)
        .dilate(1.0 / q2)
        .mul(&YPoly(vec![Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]))
}

fn polar_derivative(f: &PolarFunction, holomorphic: bool) -> Result<PolarFunction> {
    let ctx = *f.ctx();
    let q2 = ctx.q2();
    let qi = 1.0 / q2;
    let mut out = PolarFunction::zero(&ctx);
    for (m, r) in f.modes() {
        // index k of the lowering branch, or None for the difference branch
        let (target, lower) = if holomorphic {
            (m - 1, if m >= 1 { Some(m as usize) } else { None })
        } else {
            (m + 1, if m < 0 { Some((-m) as usize) } else { None })
        };
        let samples: Vec<Complex> = (0..ctx.radial_levels as i64)
            .map(|n| match lower {
                Some(k) => {
                    r.samples[n as usize] * q_number(k, qi)
                        - qi.powi(k as i32) * shifted_quotient(f, m, n)
                }
                None => -diff_quotient(f, m, n),
            })
            .collect();
        let poly = r.poly.as_ref().map(|p| match lower {
            Some(k) => p
                .scale(Complex::new(q_number(k, qi), 0.0))
                .add(&shifted_poly(p, q2).scale(Complex::new(-qi.powi(k as i32), 0.0))),
            None => diff_poly(p, q2).scale(Complex::new(-1.0, 0.0)),
        });
        let single = match poly {
            Some(p) => PolarFunction::from_ypoly(&ctx, target, p)?,
            None => PolarFunction::from_samples(&ctx, target, samples)?,
        };
        out = out.add(&single)?;
    }
    Ok(out)
}

/// `∂^{(r)} f / ∂z*` on polar data: mode `m` goes to mode `m + 1`.
pub fn dbar_polar(f: &PolarFunction) -> Result<PolarFunction> {
    polar_derivative(f, false)
}

/// `∂^{(l)} f / ∂z` on polar data: mode `m` goes to mode `m - 1`.
pub fn del_polar(f: &PolarFunction) -> Result<PolarFunction> {
    polar_derivative(f, true)
}

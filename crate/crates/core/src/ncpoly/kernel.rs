//! Invariant kernels `Σ_{i,j} {z*^i ζ^i ψ_ij(y, η) z^j ζ*^j}` in
//! `Pol(C)_q^op ⊗ Pol(C)_q`, with `y = 1 - z z*` and `η = 1 - ζ ζ*`.
//!
//! Inside braces the `z`-letters multiply in the opposite algebra, so the
//! term `(i, j)` is the pure tensor `z^j α(y) z*^i ⊗ ζ^i β(η) ζ*^j` for
//! `ψ_ij = α ⊗ β`. Each `ψ_ij` is a finite sum of monomials `c y^a η^b` with
//! complex exponents.

use super::{NormalPoly, PolarFunction, ReorderTable, TensorPoly, YPoly};
use crate::error::{Error, Result};
use crate::qspecial::{gaussian_binomial, real_pow, Complex, QContext};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `coef · y^y_exp · η^eta_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiMonomial {
    pub coef: Complex,
    pub y_exp: Complex,
    pub eta_exp: Complex,
}

impl BiMonomial {
    pub fn new(coef: Complex, y_exp: Complex, eta_exp: Complex) -> Self {
        BiMonomial {
            coef,
            y_exp,
            eta_exp,
        }
    }

    pub fn constant(coef: Complex) -> Self {
        Self::new(coef, Complex::default(), Complex::default())
    }

    /// Value at lattice levels `(a, b)`, i.e. `y = q2^a`, `η = q2^b`.
    pub fn value(&self, q2: f64, a: i64, b: i64) -> Complex {
        self.coef * real_pow(q2, self.y_exp * a as f64) * real_pow(q2, self.eta_exp * b as f64)
    }

    fn key(&self) -> [u64; 4] {
        [
            self.y_exp.re.to_bits(),
            self.y_exp.im.to_bits(),
            self.eta_exp.re.to_bits(),
            self.eta_exp.im.to_bits(),
        ]
    }
}

/// Named kernels with known expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `(1 - z* ζ)^{-1}`.
    ConjGeometric,
    /// `(1 - z ζ*)^{-1}`.
    Geometric,
    /// `K_q = (1 - z ζ*)^{-1} (1 - q^2 z ζ*)^{-1}`.
    Bergman,
    /// `(1 - z ζ*)^{-1} (1 - q^{-2} z ζ*)^{-1}`.
    CauchyGreen,
    /// `(z ζ*; q^2)_{-γ}`.
    PochhammerNeg(Complex),
    /// `(q^2 z* ζ; q^2)_{-γ}`.
    ConjPochhammerNeg(Complex),
    /// `G_m` built as a braces product of geometric kernels.
    GreenTerm(usize),
    /// `G = -Σ_{m=1}^{cutoff} (q^{-2} - 1)/(q^{-2m} - 1) G_m`.
    GreenFunction { cutoff: usize },
}

/// Integration measure on the second variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `μ`: weight `(1 - q^2) q^{2n}`.
    Mu,
    /// `ν`: weight `(1 - q^2) q^{-2n}`.
    Nu,
}

impl Measure {
    pub fn weight(&self, q2: f64, n: usize) -> f64 {
        match self {
            Measure::Mu => (1.0 - q2) * q2.powi(n as i32),
            Measure::Nu => (1.0 - q2) * q2.powi(-(n as i32)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiKernel {
    q: f64,
    cap: usize,
    terms: BTreeMap<(usize, usize), Vec<BiMonomial>>,
}

fn merge(into: &mut Vec<BiMonomial>, m: BiMonomial) {
    if m.coef == Complex::default() {
        return;
    }
    let key = m.key();
    if let Some(e) = into.iter_mut().find(|e| e.key() == key) {
        e.coef += m.coef;
    } else {
        into.push(m);
    }
}

// (t; q^{-2})_e expanded in powers of t.
fn down_poly(q2: f64, e: usize) -> YPoly {
    YPoly::qpoch(1.0, 1.0 / q2, e)
}

impl BiKernel {
    /// Empty kernel with indices `i, j < cap`.
    pub fn new(q: f64, cap: usize) -> Self {
        BiKernel {
            q,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(q: f64, cap: usize) -> Self {
        let mut k = Self::new(q, cap);
        k.terms
            .insert((0, 0), vec![BiMonomial::constant(Complex::new(1.0, 0.0))]);
        k
    }

    /// The kernel `y^a η^b` placed in the `(0, 0)` slot.
    pub fn radial(q: f64, cap: usize, a: Complex, b: Complex) -> Self {
        let mut k = Self::new(q, cap);
        k.terms.insert(
            (0, 0),
            vec![BiMonomial::new(Complex::new(1.0, 0.0), a, b)],
        );
        k
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn add_monomial(&mut self, i: usize, j: usize, m: BiMonomial) -> Result<()> {
        if i >= self.cap || j >= self.cap {
            return Err(Error::DegreeCapExceeded { i, j, cap: self.cap });
        }
        let slot = self.terms.entry((i, j)).or_default();
        merge(slot, m);
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &[BiMonomial])> {
        self.terms.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn term(&self, i: usize, j: usize) -> &[BiMonomial] {
        self.terms.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `ψ_ij` at lattice levels `(a, b)`.
    pub fn value(&self, i: usize, j: usize, a: i64, b: i64) -> Complex {
        let q2 = self.q * self.q;
        self.term(i, j).iter().map(|m| m.value(q2, a, b)).sum()
    }

    /// Sample matrix of `ψ_ij` over `n × n` lattice levels.
    pub fn samples(&self, i: usize, j: usize, n: usize) -> DMatrix<Complex> {
        DMatrix::from_fn(n, n, |a, b| self.value(i, j, a as i64, b as i64))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        for (&(i, j), v) in &other.terms {
            let slot = out.terms.entry((i, j)).or_default();
            for &m in v {
                merge(slot, m);
            }
        }
        out.terms.retain(|&(i, j), _| i < out.cap && j < out.cap);
        out
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            for m in v.iter_mut() {
                m.coef *= c;
            }
        }
        out
    }

    /// Multiplies term `(i, j)` by `q^{2(j-i)}`, i.e. applies `σ^{-1}` to the
    /// second factor, whose angular weight is `i - j`.
    pub fn twisted(&self) -> Self {
        let q2 = self.q * self.q;
        let mut out = self.clone();
        for (&(i, j), v) in out.terms.iter_mut() {
            let f = q2.powi(j as i32 - i as i32);
            for m in v.iter_mut() {
                m.coef *= f;
            }
        }
        out
    }

    /// Product in `Pol(C)_q^op ⊗ Pol(C)_q`, restoring the normal form term by
    /// term. Terms whose indices reach the cap raise
    /// [`Error::DegreeCapExceeded`] unless `truncate` is set, in which case
    /// they are dropped.
    pub fn braces_multiply_with(&self, other: &Self, truncate: bool) -> Result<Self> {
        let q2 = self.q * self.q;
        let cap = self.cap.min(other.cap);
        let mut table = ReorderTable::new(self.q);
        let mut out = Self::new(self.q, cap);
        for (&(i1, j1), v1) in &self.terms {
            for (&(i2, j2), v2) in &other.terms {
                let w = table.get(j1, i2);
                for (r, &wr) in w.iter().enumerate() {
                    for (s, &ws) in w.iter().enumerate() {
                        let e = r.max(s);
                        let (ii, jj) = (i1 + i2 - e, j1 + j2 - e);
                        if ii >= cap || jj >= cap {
                            if truncate {
                                continue;
                            }
                            return Err(Error::DegreeCapExceeded { i: ii, j: jj, cap });
                        }
                        let c0 = wr * ws;
                        let (sy1, se1) = ((i2 - r) as f64, (i2 - s) as f64);
                        let (sy2, se2) = ((j1 - r) as f64, (j1 - s) as f64);
                        for m1 in v1 {
                            for m2 in v2 {
                                let coef = m1.coef
                                    * m2.coef
                                    * c0
                                    * real_pow(q2, m1.y_exp * sy1 + m1.eta_exp * se1)
                                    * real_pow(q2, m2.y_exp * sy2 + m2.eta_exp * se2);
                                let ya = m1.y_exp + m2.y_exp;
                                let eb = m1.eta_exp + m2.eta_exp;
                                if s > r {
                                    // z*^d Ψ z^d = Ψ(q^{-2d} y, η) (y; q^{-2})_d
                                    let d = s - r;
                                    let c = coef * real_pow(q2, -ya * d as f64);
                                    for (t, pc) in down_poly(q2, d).0.iter().enumerate() {
                                        out.add_monomial(
                                            ii,
                                            jj,
                                            BiMonomial::new(c * pc, ya + t as f64, eb),
                                        )?;
                                    }
                                } else if r > s {
                                    // ζ^d Ψ ζ*^d = Ψ(y, q^{-2d} η) (η; q^{-2})_d
                                    let d = r - s;
                                    let c = coef * real_pow(q2, -eb * d as f64);
                                    for (t, pc) in down_poly(q2, d).0.iter().enumerate() {
                                        out.add_monomial(
                                            ii,
                                            jj,
                                            BiMonomial::new(c * pc, ya, eb + t as f64),
                                        )?;
                                    }
                                } else {
                                    out.add_monomial(ii, jj, BiMonomial::new(coef, ya, eb))?;
                                }
                            }
                        }
                    }
                }
            }
        }
        out.terms.retain(|_, v| !v.is_empty());
        Ok(out)
    }

    pub fn braces_multiply(&self, other: &Self) -> Result<Self> {
        self.braces_multiply_with(other, false)
    }

    /// Expansion of a named kernel with indices below `ctx.radial_levels`;
    /// higher terms are dropped since they vanish on the sampled lattice.
    pub fn geometric(spec: KernelSpec, ctx: &QContext) -> Result<Self> {
        let q = ctx.q;
        let q2 = ctx.q2();
        let cap = ctx.radial_levels;
        let one = Complex::new(1.0, 0.0);
        let mut k = Self::new(q, cap);
        let series = |k: &mut Self, conj: bool, coef: &dyn Fn(usize) -> Complex| -> Result<()> {
            for n in 0..cap {
                let (i, j) = if conj { (n, 0) } else { (0, n) };
                k.add_monomial(i, j, BiMonomial::constant(coef(n)))?;
            }
            Ok(())
        };
        match spec {
            KernelSpec::ConjGeometric => series(&mut k, true, &|_| one)?,
            KernelSpec::Geometric => series(&mut k, false, &|_| one)?,
            KernelSpec::Bergman => series(&mut k, false, &|n| {
                Complex::new((1.0 - q2.powi(n as i32 + 1)) / (1.0 - q2), 0.0)
            })?,
            KernelSpec::CauchyGreen => series(&mut k, false, &|n| {
                let r = 1.0 / q2;
                Complex::new((1.0 - r.powi(n as i32 + 1)) / (1.0 - r), 0.0)
            })?,
            KernelSpec::PochhammerNeg(g) => series(&mut k, false, &|n| {
                poisson_coefficient(q2, g, n) * real_pow(q2, -g * n as f64)
            })?,
            KernelSpec::ConjPochhammerNeg(g) => series(&mut k, true, &|n| {
                poisson_coefficient(q2, g, n) * real_pow(q2, (1.0 - g) * n as f64)
            })?,
            KernelSpec::GreenTerm(m) => return Self::green_term(ctx, m),
            KernelSpec::GreenFunction { cutoff } => {
                for m in 1..=cutoff {
                    let c = -green_coefficient(q, m);
                    k = k.add(&Self::green_term_closed(ctx, m).scale(Complex::new(c, 0.0)));
                }
            }
        }
        Ok(k)
    }

    /// `G_m = {(η (1 - z* ζ)^{-1})^m (y (1 - z ζ*)^{-1})^m}`.
    pub fn green_term(ctx: &QContext, m: usize) -> Result<Self> {
        let q = ctx.q;
        let cap = ctx.radial_levels;
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::default();
        let eta = Self::radial(q, cap, zero, one);
        let y = Self::radial(q, cap, one, zero);
        let a = eta.braces_multiply(&Self::geometric(KernelSpec::ConjGeometric, ctx)?)?;
        let b = y.braces_multiply(&Self::geometric(KernelSpec::Geometric, ctx)?)?;
        let mut acc = Self::unit(q, cap);
        for _ in 0..m {
            acc = acc.braces_multiply_with(&a, true)?;
        }
        for _ in 0..m {
            acc = acc.braces_multiply_with(&b, true)?;
        }
        Ok(acc)
    }

    /// Closed form `ψ_ij = q^{2i} [m+i-1, i]_{q^2} [m+j-1, j]_{q^2} (y η)^m`
    /// of [`BiKernel::green_term`].
    pub fn green_term_closed(ctx: &QContext, m: usize) -> Self {
        let q2 = ctx.q2();
        let cap = ctx.radial_levels;
        let mut k = Self::new(ctx.q, cap);
        let e = Complex::new(m as f64, 0.0);
        for i in 0..cap {
            for j in 0..cap {
                if i.abs_diff(j) > ctx.angular_cutoff {
                    continue;
                }
                let c = q2.powi(i as i32)
                    * gaussian_binomial(m + i - 1, i, q2)
                    * gaussian_binomial(m + j - 1, j, q2);
                k.terms
                    .insert((i, j), vec![BiMonomial::new(Complex::new(c, 0.0), e, e)]);
            }
        }
        k
    }

    /// `(id ⊗ ∫ · dm)(K (1 ⊗ f))`: integrates the second variable against `f`.
    /// Each term `(i, j)` couples input mode `j - i` to the same output mode.
    /// The `ζ`-sums run over the sampled levels of `f`.
    pub fn integrate(&self, f: &PolarFunction, measure: Measure) -> Result<PolarFunction> {
        let ctx = *f.ctx();
        let q2 = ctx.q2();
        let nlev = ctx.radial_levels;
        let mut out: BTreeMap<i64, Vec<Complex>> = BTreeMap::new();
        let weights: Vec<f64> = (0..nlev).map(|b| measure.weight(q2, b)).collect();
        // dp[n][k] = (q^{2n}; q^{-2})_k, up[n][k] = (q^{2n+2}; q^2)_k
        let width = self.cap.max(ctx.angular_cutoff) + 1;
        let table = |shift: i32, step: i32| -> Vec<Vec<f64>> {
            (0..nlev)
                .map(|n| {
                    let mut row = vec![1.0; width + 1];
                    for k in 0..width {
                        row[k + 1] = row[k] * (1.0 - q2.powi(n as i32 + shift + step * k as i32));
                    }
                    row
                })
                .collect()
        };
        let dp = table(0, -1);
        let up = table(1, 1);
        let pow_row = |e: Complex, len: usize| -> Vec<Complex> {
            let base = real_pow(q2, e);
            let mut v = Vec::with_capacity(len);
            let mut acc = Complex::new(1.0, 0.0);
            for _ in 0..len {
                v.push(acc);
                acc *= base;
            }
            v
        };
        for (&(i, j), monos) in &self.terms {
            let p = j as i64 - i as i64;
            if f.mode(p).is_none() {
                continue;
            }
            let (kin, kout) = if p >= 0 { (i, i) } else { (i, j) };
            if kin >= nlev && kout >= nlev {
                continue;
            }
            let g: Vec<Complex> = (kin..nlev)
                .map(|b| {
                    let v = if p >= 0 {
                        up[b][p as usize] * f.value_at(p, b as i64)
                    } else {
                        f.value_at(p, b as i64 + p)
                    };
                    v * dp[b][kin] * weights[b]
                })
                .collect();
            let acc = out.entry(p).or_insert_with(|| vec![Complex::default(); nlev]);
            for m in monos {
                let beta = pow_row(m.eta_exp, g.len());
                let integral: Complex = g.iter().zip(&beta).map(|(a, b)| a * b).sum();
                let c = m.coef * integral;
                if c == Complex::default() || kout >= nlev {
                    continue;
                }
                let alpha = pow_row(m.y_exp, nlev - kout);
                for a in kout..nlev {
                    acc[a] += c * alpha[a - kout] * dp[a][kout];
                }
            }
        }
        let mut res = PolarFunction::zero(&ctx);
        for (p, s) in out {
            res.set_samples(p, s)?;
        }
        Ok(res)
    }

    /// The kernel as an element of `Pol(C)_q^op ⊗ Pol(C)_q`; requires
    /// nonnegative integer exponents.
    pub fn to_tensor(&self) -> Result<TensorPoly> {
        let q = self.q;
        let y = NormalPoly::y(q);
        let mut out = TensorPoly::zero(q);
        for (&(i, j), monos) in &self.terms {
            for m in monos {
                let a = int_exp(m.y_exp)?;
                let b = int_exp(m.eta_exp)?;
                let one = Complex::new(1.0, 0.0);
                let first = NormalPoly::monomial(q, j, 0, one)
                    .multiply(&y.pow(a))
                    .multiply(&NormalPoly::monomial(q, 0, i, one));
                let second = NormalPoly::monomial(q, i, 0, one)
                    .multiply(&y.pow(b))
                    .multiply(&NormalPoly::monomial(q, 0, j, one));
                out.add_pure(&first, &second, m.coef);
            }
        }
        Ok(out)
    }
}

fn int_exp(e: Complex) -> Result<usize> {
    if e.im == 0.0 && e.re >= 0.0 && e.re.fract() == 0.0 {
        Ok(e.re as usize)
    } else {
        Err(Error::Mismatch(format!("exponent {e} is not a nonnegative integer")))
    }
}

/// `(q^{2γ}; q^2)_n / (q^2; q^2)_n`.
pub fn poisson_coefficient(q2: f64, gamma: Complex, n: usize) -> Complex {
    let g = real_pow(q2, gamma);
    let mut acc = Complex::new(1.0, 0.0);
    for t in 0..n {
        acc *= (1.0 - g * q2.powi(t as i32)) / (1.0 - q2.powi(t as i32 + 1));
    }
    acc
}

/// `(q^{-2} - 1) / (q^{-2m} - 1)`, the weight of `G_m` in the Green function.
pub fn green_coefficient(q: f64, m: usize) -> f64 {
    let r = 1.0 / (q * q);
    (r - 1.0) / (r.powi(m as i32) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> QContext {
        QContext::new(0.5, n, 8).unwrap()
    }

    #[test]
    fn named_expansions() {
        let c = ctx(8);
        let k = BiKernel::geometric(KernelSpec::ConjGeometric, &c).unwrap();
        assert_eq!(k.term(3, 0), &[BiMonomial::constant(Complex::new(1.0, 0.0))]);
        let b = BiKernel::geometric(KernelSpec::Bergman, &c).unwrap();
        let g = BiKernel::geometric(KernelSpec::Geometric, &c).unwrap();
        let g2 = BiKernel::unit(0.5, 8).braces_multiply(&g).unwrap();
        assert_eq!(g2, g);
        for n in 0..6 {
            let expect = (1.0 - 0.25f64.powi(n as i32 + 1)) / 0.75;
            assert!((b.value(0, n, 0, 0).re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn bergman_is_a_cauchy_product() {
        let c = ctx(10);
        let q2: f64 = 0.25;
        let g = BiKernel::geometric(KernelSpec::Geometric, &c).unwrap();
        let mut h = BiKernel::new(0.5, 10);
        for n in 0..10 {
            h.add_monomial(0, n, BiMonomial::constant(Complex::new(q2.powi(n as i32), 0.0)))
                .unwrap();
        }
        let prod = g.braces_multiply_with(&h, true).unwrap();
        let b = BiKernel::geometric(KernelSpec::Bergman, &c).unwrap();
        for n in 0..10 {
            assert!((prod.value(0, n, 1, 2) - b.value(0, n, 1, 2)).norm() < 1e-14);
        }
    }

    #[test]
    fn green_term_matches_closed_form() {
        let c = QContext::new(0.5, 7, 7).unwrap();
        for m in 1..4 {
            let built = BiKernel::green_term(&c, m).unwrap();
            let closed = BiKernel::green_term_closed(&c, m);
            for i in 0..7 {
                for j in 0..7 {
                    for (a, b) in [(0, 0), (1, 3), (4, 2)] {
                        let d = built.value(i, j, a, b) - closed.value(i, j, a, b);
                        assert!(d.norm() < 1e-12, "m={m} i={i} j={j}");
                    }
                }
            }
            assert!((closed.value(0, 0, 0, 0) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn braces_agree_with_tensor_algebra() {
        let q = 0.5;
        let mut k1 = BiKernel::new(q, 6);
        k1.add_monomial(1, 2, BiMonomial::new(Complex::new(0.7, 0.2), 1.0.into(), 0.0.into()))
            .unwrap();
        k1.add_monomial(0, 1, BiMonomial::new(Complex::new(-0.3, 0.0), 0.0.into(), 2.0.into()))
            .unwrap();
        let mut k2 = BiKernel::new(q, 6);
        k2.add_monomial(2, 1, BiMonomial::new(Complex::new(1.1, 0.0), 1.0.into(), 1.0.into()))
            .unwrap();
        k2.add_monomial(1, 0, BiMonomial::new(Complex::new(0.4, -0.5), 0.0.into(), 0.0.into()))
            .unwrap();
        let prod = k1.braces_multiply(&k2).unwrap().to_tensor().unwrap();
        let direct = k1.to_tensor().unwrap().braces(&k2.to_tensor().unwrap());
        assert!(prod.max_abs_diff(&direct) < 1e-13);
    }

    #[test]
    fn cap_is_enforced() {
        let c = ctx(4);
        let g = BiKernel::geometric(KernelSpec::Geometric, &c).unwrap();
        assert!(matches!(
            g.braces_multiply(&g),
            Err(Error::DegreeCapExceeded { cap: 4, .. })
        ));
    }

    #[test]
    fn green_coefficients() {
        assert!((green_coefficient(0.5, 1) - 1.0).abs() < 1e-15);
        assert!((green_coefficient(0.99, 5) - 0.2).abs() < 1e-2);
    }
}

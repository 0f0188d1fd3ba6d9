//! Polar decomposition `f = Σ_{m>0} z^m ψ_m(y) + ψ_0(y) + Σ_{m>0} ψ_{-m}(y) z*^m`
//! with `y = 1 - z z*`, sampled on the lattice `y = q^{2n}`.

use super::NormalPoly;
use crate::error::{Error, Result};
use crate::qspecial::{Complex, QContext};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// Polynomial `Σ c_r y^r` in the radial variable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct YPoly(pub Vec<Complex>);

impl YPoly {
    pub fn constant(c: Complex) -> Self {
        YPoly(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(1.0, 0.0))
    }

    /// `Π_{i<k} (1 - a base^i y)`.
    pub fn qpoch(a: f64, base: f64, k: usize) -> Self {
        let mut p = Self::one();
        let mut f = a;
        for _ in 0..k {
            p = p.mul(&YPoly(vec![Complex::new(1.0, 0.0), Complex::new(-f, 0.0)]));
            f *= base;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, y: f64) -> Complex {
        self.0
            .iter()
            .rev()
            .fold(Complex::default(), |acc, &c| acc * y + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return YPoly::default();
        }
        let mut out = vec![Complex::default(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        YPoly(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        YPoly(
            (0..n)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or_default()
                        + other.0.get(i).copied().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex) -> Self {
        YPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// Substitution `y -> s y`.
    pub fn dilate(&self, s: f64) -> Self {
        let mut p = 1.0;
        YPoly(
            self.0
                .iter()
                .map(|&a| {
                    let v = a * p;
                    p *= s;
                    v
                })
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        YPoly(self.0.iter().map(|a| a.conj()).collect())
    }
}

/// Radial profile of one angular mode: lattice samples plus an optional
/// closed polynomial form.
#[derive(Debug, Clone, PartialEq)]
pub struct Radial {
    pub samples: Vec<Complex>,
    pub poly: Option<YPoly>,
}

/// Distribution on the quantum disc in polar form, truncated to
/// `radial_levels` lattice points and `|m| <= angular_cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFunction {
    ctx: QContext,
    modes: BTreeMap<i64, Radial>,
}

// (q^{2n}; q^{-2})_k with n possibly negative.
fn down_poch(q2: f64, n: i64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k as i64 {
        acc *= 1.0 - q2.powi((n - i) as i32);
    }
    acc
}

// (q^{2n+2}; q^2)_k.
fn up_poch(q2: f64, n: i64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k as i64 {
        acc *= 1.0 - q2.powi((n + 1 + i) as i32);
    }
    acc
}

impl PolarFunction {
    pub fn zero(ctx: &QContext) -> Self {
        PolarFunction {
            ctx: *ctx,
            modes: BTreeMap::new(),
        }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    fn check_mode(&self, m: i64) -> Result<()> {
        if m.unsigned_abs() as usize > self.ctx.angular_cutoff {
            return Err(Error::AngularOverflow {
                mode: m,
                cutoff: self.ctx.angular_cutoff,
            });
        }
        Ok(())
    }

    /// Sample-only mode `m`.
    pub fn from_samples(ctx: &QContext, m: i64, samples: Vec<Complex>) -> Result<Self> {
        let mut f = Self::zero(ctx);
        f.set_samples(m, samples)?;
        Ok(f)
    }

    /// Mode `m` with radial part given levelwise by `g(n)`.
    pub fn from_fn<F: Fn(usize) -> Complex>(ctx: &QContext, m: i64, g: F) -> Result<Self> {
        Self::from_samples(ctx, m, (0..ctx.radial_levels).map(g).collect())
    }

    /// Mode `m` with closed radial form `p`.
    pub fn from_ypoly(ctx: &QContext, m: i64, p: YPoly) -> Result<Self> {
        let mut f = Self::zero(ctx);
        f.check_mode(m)?;
        let samples = ctx.levels().into_iter().map(|y| p.eval(y)).collect();
        f.modes.insert(
            m,
            Radial {
                samples,
                poly: Some(p),
            },
        );
        Ok(f)
    }

    pub fn set_samples(&mut self, m: i64, samples: Vec<Complex>) -> Result<()> {
        self.check_mode(m)?;
        if samples.len() != self.ctx.radial_levels {
            return Err(Error::Mismatch(format!(
                "mode {m} has {} samples, expected {}",
                samples.len(),
                self.ctx.radial_levels
            )));
        }
        self.modes.insert(m, Radial { samples, poly: None });
        Ok(())
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &Radial)> {
        self.modes.iter().map(|(&m, r)| (m, r))
    }

    pub fn mode_indices(&self) -> Vec<i64> {
        self.modes.keys().copied().collect()
    }

    pub fn mode(&self, m: i64) -> Option<&Radial> {
        self.modes.get(&m)
    }

    /// Samples of mode `m`, zeros when absent.
    pub fn samples(&self, m: i64) -> Vec<Complex> {
        self.modes
            .get(&m)
            .map(|r| r.samples.clone())
            .unwrap_or_else(|| vec![Complex::default(); self.ctx.radial_levels])
    }

    /// `ψ_m(q^{2n})` for any integer `n`: negative levels are off the lattice
    /// and give zero; levels past the truncation use the closed form when
    /// there is one and zero otherwise.
    pub fn value_at(&self, m: i64, n: i64) -> Complex {
        if n < 0 {
            return Complex::default();
        }
        match self.modes.get(&m) {
            None => Complex::default(),
            Some(r) => {
                if (n as usize) < r.samples.len() {
                    r.samples[n as usize]
                } else if let Some(p) = &r.poly {
                    p.eval(self.ctx.q2().powi(n as i32))
                } else {
                    Complex::default()
                }
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.modes.values().all(|r| r.poly.is_some())
    }

    pub fn max_abs(&self) -> f64 {
        self.modes
            .values()
            .flat_map(|r| r.samples.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::Mismatch("polar functions use different contexts".into()));
        }
        let mut out = self.clone();
        for (&m, r) in &other.modes {
            let entry = out.modes.entry(m).or_insert_with(|| Radial {
                samples: vec![Complex::default(); self.ctx.radial_levels],
                poly: Some(YPoly::default()),
            });
            for (a, b) in entry.samples.iter_mut().zip(&r.samples) {
                *a += b * sign;
            }
            entry.poly = match (&entry.poly, &r.poly) {
                (Some(a), Some(b)) => Some(a.add(&b.scale(Complex::new(sign, 0.0)))),
                _ => None,
            };
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, c: Complex) -> Self {
        let mut out = self.clone();
        for r in out.modes.values_mut() {
            for s in r.samples.iter_mut() {
                *s *= c;
            }
            r.poly = r.poly.as_ref().map(|p| p.scale(c));
        }
        out
    }

    /// Levelwise map of every mode's samples; closed forms are dropped.
    pub fn map_samples<F: Fn(i64, usize, Complex) -> Complex>(&self, g: F) -> Self {
        let mut out = self.clone();
        for (&m, r) in out.modes.iter_mut() {
            for (n, s) in r.samples.iter_mut().enumerate() {
                *s = g(m, n, *s);
            }
            r.poly = None;
        }
        out
    }

    /// The involution: mode `m` with `ψ` goes to mode `-m` with `conj ψ`.
    pub fn adjoint(&self) -> Self {
        PolarFunction {
            ctx: self.ctx,
            modes: self
                .modes
                .iter()
                .map(|(&m, r)| {
                    (
                        -m,
                        Radial {
                            samples: r.samples.iter().map(|c| c.conj()).collect(),
                            poly: r.poly.as_ref().map(|p| p.conj()),
                        },
                    )
                })
                .collect(),
        }
    }

    /// Unique polar decomposition of a polynomial.
    pub fn from_normal(f: &NormalPoly, ctx: &QContext) -> Result<Self> {
        let q2 = ctx.q2();
        let mut out = Self::zero(ctx);
        let levels = ctx.levels();
        for ((j, k), c) in f.terms() {
            let (m, r) = if j >= k {
                ((j - k) as i64, k)
            } else {
                (-((k - j) as i64), j)
            };
            out.check_mode(m)?;
            let poly = YPoly::qpoch(1.0, 1.0 / q2, r).scale(c);
            let samples: Vec<Complex> = (0..levels.len())
                .map(|n| c * down_poch(q2, n as i64, r))
                .collect();
            let single = PolarFunction {
                ctx: *ctx,
                modes: BTreeMap::from([(
                    m,
                    Radial {
                        samples,
                        poly: Some(poly),
                    },
                )]),
            };
            out = out.add(&single)?;
        }
        Ok(out)
    }

    /// Inverse of [`PolarFunction::from_normal`] for closed polynomial forms.
    pub fn to_normal(&self) -> Result<NormalPoly> {
        let q = self.ctx.q;
        let y = NormalPoly::y(q);
        let mut out = NormalPoly::zero(q);
        for (&m, r) in &self.modes {
            let poly = r.poly.as_ref().ok_or(Error::NotPolynomial { mode: m })?;
            let mut radial = NormalPoly::zero(q);
            let mut ypow = NormalPoly::one(q);
            for &c in &poly.0 {
                radial = &radial + &ypow.scale(c);
                ypow = ypow.multiply(&y);
            }
            let k = m.unsigned_abs() as usize;
            let term = if m >= 0 {
                NormalPoly::monomial(q, k, 0, Complex::new(1.0, 0.0)).multiply(&radial)
            } else {
                radial.multiply(&NormalPoly::monomial(q, 0, k, Complex::new(1.0, 0.0)))
            };
            out = &out + &term;
        }
        Ok(out)
    }

    /// Product in the algebra, computed levelwise on canonical elements
    /// `z^a φ(y)` and `φ(y) z*^k`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::Mismatch("polar functions use different contexts".into()));
        }
        let q2 = self.ctx.q2();
        let nlev = self.ctx.radial_levels;
        let mut out = Self::zero(&self.ctx);
        for (&a, ra) in &self.modes {
            for (&b, rb) in &other.modes {
                let m = a + b;
                out.check_mode(m)?;
                let phi = |n: i64| self.value_at(a, n);
                let psi = |n: i64| other.value_at(b, n);
                let (samples, poly): (Vec<Complex>, Option<YPoly>) = if a >= 0 && b >= 0 {
                    let s = (0..nlev as i64).map(|n| phi(n + b) * psi(n)).collect();
                    let p = closed(ra, rb, |f, g| f.dilate(q2.powi(b as i32)).mul(g));
                    (s, p)
                } else if a < 0 && b < 0 {
                    let k = -a;
                    let s = (0..nlev as i64).map(|n| phi(n) * psi(n + k)).collect();
                    let p = closed(ra, rb, |f, g| f.mul(&g.dilate(q2.powi(k as i32))));
                    (s, p)
                } else if a >= 0 {
                    let l = -b;
                    let t = a.min(l);
                    let s = (0..nlev as i64)
                        .map(|n| phi(n - t) * psi(n - t) * down_poch(q2, n, t as usize))
                        .collect();
                    let p = closed(ra, rb, |f, g| {
                        f.mul(g)
                            .dilate(q2.powi(-t as i32))
                            .mul(&YPoly::qpoch(1.0, 1.0 / q2, t as usize))
                    });
                    (s, p)
                } else {
                    let k = -a;
                    if b >= k {
                        let s_ = b - k;
                        let s = (0..nlev as i64)
                            .map(|n| phi(n + s_) * up_poch(q2, n + s_, k as usize) * psi(n))
                            .collect();
                        let p = closed(ra, rb, |f, g| {
                            f.dilate(q2.powi(s_ as i32))
                                .mul(&YPoly::qpoch(q2.powi(s_ as i32 + 1), q2, k as usize))
                                .mul(g)
                        });
                        (s, p)
                    } else {
                        let s_ = k - b;
                        let s = (0..nlev as i64)
                            .map(|n| phi(n) * up_poch(q2, n + s_, b as usize) * psi(n + s_))
                            .collect();
                        let p = closed(ra, rb, |f, g| {
                            f.mul(&YPoly::qpoch(q2.powi(s_ as i32 + 1), q2, b as usize))
                                .mul(&g.dilate(q2.powi(s_ as i32)))
                        });
                        (s, p)
                    }
                };
                let single = PolarFunction {
                    ctx: self.ctx,
                    modes: BTreeMap::from([(m, Radial { samples, poly })]),
                };
                out = out.add(&single)?;
            }
        }
        Ok(out)
    }
}

fn closed<F: Fn(&YPoly, &YPoly) -> YPoly>(a: &Radial, b: &Radial, f: F) -> Option<YPoly> {
    match (&a.poly, &b.poly) {
        (Some(x), Some(y)) => Some(f(x, y)),
        _ => None,
    }
}

/// `tr T(f) T(g)` for finite functions, evaluated on a truncation that
/// contains both supports.
pub fn trace_pairing(f: &PolarFunction, g: &PolarFunction) -> Result<Complex> {
    let ctx = f.ctx();
    let dim = ctx.radial_levels + ctx.angular_cutoff + 1;
    let a = crate::rep::RepMatrix::from_polar(f, dim);
    let b = crate::rep::RepMatrix::from_polar(g, dim);
    let (a, b) = (a.matrix(), b.matrix());
    let mut acc = Complex::default();
    for r in 0..dim {
        for c in 0..dim {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    Ok(acc)
}

#[derive(Serialize, Deserialize)]
struct PolarRepr {
    q: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    modes: BTreeMap<String, Vec<[f64; 2]>>,
}

impl Serialize for PolarFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolarRepr {
            q: self.ctx.q,
            n: self.ctx.radial_levels,
            m: self.ctx.angular_cutoff,
            modes: self
                .modes
                .iter()
                .map(|(m, r)| {
                    (
                        m.to_string(),
                        r.samples.iter().map(|c| [c.re, c.im]).collect(),
                    )
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolarFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolarRepr::deserialize(d)?;
        let ctx = QContext::new(repr.q, repr.n, repr.m).map_err(D::Error::custom)?;
        let mut f = PolarFunction::zero(&ctx);
        for (key, samples) in repr.modes {
            let m: i64 = key.parse().map_err(D::Error::custom)?;
            f.set_samples(m, samples.iter().map(|p| Complex::new(p[0], p[1])).collect())
                .map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QContext {
        QContext::new(0.5, 12, 6).unwrap()
    }

    fn parse(s: &str) -> NormalPoly {
        NormalPoly::parse(s, &ctx()).unwrap()
    }

    #[test]
    fn unit_and_zz_star() {
        let one = PolarFunction::from_normal(&parse("1"), &ctx()).unwrap();
        assert!(one.samples(0).iter().all(|c| (c - 1.0).norm() < 1e-16));
        let f = PolarFunction::from_normal(&parse("z z*"), &ctx()).unwrap();
        for (n, y) in ctx().levels().into_iter().enumerate() {
            assert!((f.samples(0)[n] - (1.0 - y)).norm() < 1e-15);
        }
    }

    #[test]
    fn round_trips() {
        for s in ["z", "z* y", "z^2 y^3", "z*^3 z + 2 z^2 z*"] {
            let p = parse(s);
            let back = PolarFunction::from_normal(&p, &ctx()).unwrap().to_normal().unwrap();
            assert!(back.max_abs_diff(&p) < 1e-11, "{s}");
        }
    }

    #[test]
    fn z_star_power_times_z_power() {
        // z*^2 z^2 = (q^2 y; q^2)_2
        let f = PolarFunction::from_normal(&parse("z*^2 z^2"), &ctx()).unwrap();
        let q2 = 0.25;
        for (n, y) in ctx().levels().into_iter().enumerate() {
            let expect = (1.0 - q2 * y) * (1.0 - q2 * q2 * y);
            assert!((f.samples(0)[n] - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn product_matches_engine() {
        let c = ctx();
        let cases = [("z^2 z*", "z* z^3"), ("z*^2 y", "z"), ("z y", "z*^3"), ("z*", "z^2 y")];
        for (a, b) in cases {
            let (pa, pb) = (parse(a), parse(b));
            let fa = PolarFunction::from_normal(&pa, &c).unwrap();
            let fb = PolarFunction::from_normal(&pb, &c).unwrap();
            let prod = fa.product(&fb).unwrap();
            let direct = PolarFunction::from_normal(&pa.multiply(&pb), &c).unwrap();
            let diff = prod.sub(&direct).unwrap();
            assert!(diff.max_abs() < 1e-13, "{a} * {b}");
            assert!(prod.to_normal().unwrap().max_abs_diff(&pa.multiply(&pb)) < 1e-11);
        }
    }

    #[test]
    fn overflow_and_not_polynomial() {
        let small = QContext::new(0.5, 4, 1).unwrap();
        assert!(matches!(
            PolarFunction::from_normal(&parse("z^2"), &small),
            Err(Error::AngularOverflow { mode: 2, cutoff: 1 })
        ));
        let f = PolarFunction::from_fn(&small, -1, |n| Complex::new(n as f64, 0.0)).unwrap();
        assert!(matches!(f.to_normal(), Err(Error::NotPolynomial { mode: -1 })));
    }

    #[test]
    fn json_shape() {
        let f = PolarFunction::from_normal(&parse("z + 2"), &QContext::new(0.5, 2, 1).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&f).unwrap();
        assert_eq!(v["N"], 2);
        assert_eq!(v["modes"]["1"][0][0], 1.0);
        let back: PolarFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back.samples(0), f.samples(0));
    }
}

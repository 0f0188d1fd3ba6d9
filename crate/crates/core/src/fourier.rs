//! The Fourier transform onto the principal series `l = -1/2 + iρ`,
//! `0 <= ρ <= π/h`, its inverse and the Plancherel density.

use crate::error::{Error, Result};
use crate::harmonic::eigen::{c_function, h_of, poisson_mode};
use crate::harmonic::sector::sector_weight;
use crate::ncpoly::{Measure, PolarFunction};
use crate::qspecial::{Complex, QContext};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const DEFAULT_NODES: usize = 128;

/// `dσ/dρ = (1/2π) h e^h/(e^h - 1) / (c(-1/2 + iρ) c(-1/2 - iρ))`.
pub fn plancherel_density(rho: f64, q: f64, tol: f64) -> Result<f64> {
    let h = h_of(q);
    if !(0.0..=PI / h).contains(&rho) {
        return Err(Error::InvalidContext(format!("ρ = {rho} outside [0, π/h]")));
    }
    let a = c_function(Complex::new(-0.5, rho), q, tol)?;
    let b = c_function(Complex::new(-0.5, -rho), q, tol)?;
    let pre = h * h.exp() / (h.exp() - 1.0) / (2.0 * PI);
    let d = pre / (a * b);
    if d.im.abs() > 1e-10 * d.norm() {
        return Err(Error::Mismatch(format!("density not real at ρ = {rho}: {d}")));
    }
    Ok(d.re)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let prev = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (t * p - prev) / (t * t - 1.0);
            let step = p / dp;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Nodes, weights and densities on `[0, π/h]`.
pub fn spectral_grid(nodes: usize, q: f64, tol: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if nodes < 2 {
        return Err(Error::InvalidContext("at least two quadrature nodes are needed".into()));
    }
    let b = PI / h_of(q);
    let (x, w) = gauss_legendre(nodes);
    let rho: Vec<f64> = x.iter().map(|t| (t + 1.0) * b / 2.0).collect();
    let w: Vec<f64> = w.iter().map(|v| v * b / 2.0).collect();
    let d = rho
        .iter()
        .map(|&r| plancherel_density(r, q, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok((rho, w, d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierImage {
    pub q: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub density: Vec<f64>,
    /// Boundary mode to values at the nodes.
    pub grid: BTreeMap<i64, Vec<Complex>>,
}

impl FourierImage {
    pub fn value(&self, m: i64, i: usize) -> Complex {
        self.grid.get(&m).map(|v| v[i]).unwrap_or_default()
    }

    /// `⟨g1, g2⟩` in `L²(dθ/2π) ⊗ L²(dσ)`.
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        if self.nodes != other.nodes {
            return Err(Error::Mismatch("images live on different grids".into()));
        }
        let mut s = Complex::default();
        for (m, a) in &self.grid {
            if let Some(b) = other.grid.get(m) {
                for i in 0..self.nodes.len() {
                    s += a[i] * b[i].conj() * self.density[i] * self.weights[i];
                }
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("image serializes")
    }
}

// Eigenfunction of disc mode m at ρ, sampled on the lattice.
fn eigen_samples(rho: f64, m: i64, ctx: &QContext) -> Vec<Complex> {
    poisson_mode(Complex::new(0.5, rho), m, ctx)
}

/// `(F u)(m, ρ) = ⟨u_m, e_m(ρ)⟩_ν` with `e_m(ρ)` the disc-mode-`m` part of
/// the Poisson extension of `e^{imθ}` at `l = -1/2 + iρ`.
pub fn fourier_forward(u: &PolarFunction, nodes: usize) -> Result<FourierImage> {
    let ctx = u.ctx();
    let q2 = ctx.q2();
    let (rho, w, d) = spectral_grid(nodes, ctx.q, ctx.series_tol)?;
    let mut grid = BTreeMap::new();
    for (m, r) in u.modes() {
        let wn: Vec<f64> = (0..ctx.radial_levels).map(|n| sector_weight(q2, m, n, Measure::Nu)).collect();
        let row = rho
            .iter()
            .map(|&p| {
                let e = eigen_samples(p, m, ctx);
                let s: Complex = (0..ctx.radial_levels).map(|n| e[n].conj() * r.samples[n] * wn[n]).sum();
                if s.is_finite() {
                    Ok(s)
                } else {
                    Err(Error::Divergence(format!("ν-pairing diverges in mode {m}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        grid.insert(m, row);
    }
    Ok(FourierImage {
        q: ctx.q,
        nodes: rho,
        weights: w,
        density: d,
        grid,
    })
}

/// `u_m = ∫ e_m(ρ) g(m, ρ) dσ(ρ)` by the stored quadrature.
pub fn fourier_inverse(g: &FourierImage, ctx: &QContext) -> Result<PolarFunction> {
    if (g.q - ctx.q).abs() > 0.0 {
        return Err(Error::Mismatch("image and context use different q".into()));
    }
    let mut out = PolarFunction::zero(ctx);
    for (&m, vals) in &g.grid {
        let mut acc = vec![Complex::default(); ctx.radial_levels];
        for (i, &p) in g.nodes.iter().enumerate() {
            let c = vals[i] * g.density[i] * g.weights[i];
            if c == Complex::default() {
                continue;
            }
            for (a, e) in acc.iter_mut().zip(eigen_samples(p, m, ctx)) {
                *a += e * c;
            }
        }
        out.set_samples(m, acc)?;
    }
    Ok(out)
}

/// `⟨u, v⟩_ν` over the sampled levels.
pub fn nu_inner(u: &PolarFunction, v: &PolarFunction) -> Complex {
    let q2 = u.ctx().q2();
    let mut s = Complex::default();
    for m in u.mode_indices() {
        let (a, b) = (u.samples(m), v.samples(m));
        for n in 0..a.len() {
            s += a[n] * b[n].conj() * sector_weight(q2, m, n, Measure::Nu);
        }
    }
    s
}

/// Levels compared when measuring `F^{-1} F u - u`; higher levels oscillate
/// faster in `ρ` than the quadrature resolves.
pub const INVERSION_LEVELS: usize = 20;

/// `max_{n < INVERSION_LEVELS} |F^{-1}F u - u| / max |u|`.
pub fn inversion_error(u: &PolarFunction, nodes: usize) -> Result<f64> {
    let back = fourier_inverse(&fourier_forward(u, nodes)?, u.ctx())?;
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for m in u.mode_indices() {
        let (a, b) = (u.samples(m), back.samples(m));
        for n in 0..a.len() {
            scale = scale.max(a[n].norm());
            if n < INVERSION_LEVELS {
                err = err.max((a[n] - b[n]).norm());
            }
        }
    }
    Ok(err / scale)
}

/// `|⟨Fu, Fv⟩ - ⟨u, v⟩_ν| / |⟨u, v⟩_ν|`.
pub fn parseval_defect(u: &PolarFunction, v: &PolarFunction, nodes: usize) -> Result<f64> {
    let lhs = fourier_forward(u, nodes)?.inner(&fourier_forward(v, nodes)?)?;
    let rhs = nu_inner(u, v);
    Ok((lhs - rhs).norm() / rhs.norm())
}

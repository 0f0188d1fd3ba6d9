//! Poisson kernels, spherical functions, restriction onto circles and
//! recovery of boundary values.

use crate::error::{Error, Result};
use crate::ncpoly::{poisson_coefficient, BoundaryPoly, PolarFunction};
use crate::qspecial::{basic_hyper, qgamma, real_pow, Complex, QContext};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// `λ(l) = -(1 - q^{-2l})(1 - q^{2l+2}) / (1 - q^2)^2`.
pub fn eigenvalue(l: Complex, q: f64) -> Complex {
    let q2 = q * q;
    -(1.0 - real_pow(q2, -l)) * (1.0 - real_pow(q2, l + 1.0)) / ((1.0 - q2) * (1.0 - q2))
}

/// `c(l) = Γ_{q^2}(2l + 1) / Γ_{q^2}(l + 1)^2`.
pub fn c_function(l: Complex, q: f64, tol: f64) -> Result<Complex> {
    let q2 = q * q;
    let num = qgamma(2.0 * l + 1.0, q2, tol)?;
    let den = qgamma(l + 1.0, q2, tol)?;
    Ok(num / (den * den))
}

/// The constant `lim φ_l(q^{2n}) q^{2n l'}` with `l' = l` for `Re l > -1/2`
/// and `l' = -1 - l` otherwise; it equals `c(l')`.
pub fn asymptotic_constant(l: Complex, q: f64, tol: f64) -> Result<Complex> {
    if l.re > -0.5 {
        c_function(l, q, tol)
    } else {
        c_function(-1.0 - l, q, tol)
    }
}

/// `h = -2 ln q`.
pub fn h_of(q: f64) -> f64 {
    -2.0 * q.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam {
    pub l: Complex,
    pub lambda: Complex,
    pub c: Complex,
    pub rho: Option<f64>,
    pub h: f64,
}

impl SpectralParam {
    pub fn new(l: Complex, q: f64, tol: f64) -> Result<Self> {
        Ok(SpectralParam {
            l,
            lambda: eigenvalue(l, q),
            c: c_function(l, q, tol)?,
            rho: None,
            h: h_of(q),
        })
    }

    /// `l = -1/2 + iρ` with `0 <= ρ <= π/h`.
    pub fn from_rho(rho: f64, q: f64, tol: f64) -> Result<Self> {
        let h = h_of(q);
        if !(0.0..=PI / h).contains(&rho) {
            return Err(Error::InvalidContext(format!("ρ = {rho} outside [0, π/h]")));
        }
        let mut p = Self::new(Complex::new(-0.5, rho), q, tol)?;
        p.rho = Some(rho);
        Ok(p)
    }
}

/// Disc mode `j` of `∫ P_γ(z, e^{iθ}) e^{ijθ} dθ/2π`, sampled on the lattice.
pub fn poisson_mode(gamma: Complex, j: i64, ctx: &QContext) -> Vec<Complex> {
    let q2 = ctx.q2();
    let nlev = ctx.radial_levels;
    let p = j.unsigned_abs() as usize;
    let a: Vec<Complex> = (0..nlev + p).map(|t| poisson_coefficient(q2, gamma, t)).collect();
    // weight of term k
    let w: Vec<Complex> = (0..nlev)
        .map(|k| {
            let e = if j >= 0 {
                -gamma * (k + p) as f64 + (1.0 - gamma) * k as f64
            } else {
                -gamma * k as f64 + (1.0 - gamma) * (k + p) as f64
            };
            a[k] * a[k + p] * real_pow(q2, e)
        })
        .collect();
    (0..nlev)
        .map(|n| {
            let mut sum = Complex::default();
            let mut poch = 1.0;
            for (k, wk) in w.iter().enumerate().take(n + 1) {
                sum += wk * poch;
                poch *= 1.0 - q2.powi(n as i32 - k as i32);
            }
            let lead = if j >= 0 {
                real_pow(q2, gamma * (n + p) as f64)
            } else {
                real_pow(q2, gamma * n as f64)
            };
            lead * sum
        })
        .collect()
}

/// Fourier coefficients of `P_γ(z, e^{iθ})`: the `e^{ikθ}` coefficient is a
/// function of disc mode `-k`.
pub fn poisson_kernel(gamma: Complex, ctx: &QContext) -> Result<BTreeMap<i64, PolarFunction>> {
    let m = ctx.angular_cutoff as i64;
    let mut out = BTreeMap::new();
    for k in -m..=m {
        out.insert(k, PolarFunction::from_samples(ctx, -k, poisson_mode(gamma, -k, ctx))?);
    }
    Ok(out)
}

/// `u = ∫ P_{l+1}(z, e^{iθ}) f(e^{iθ}) dθ/2π`, an eigenfunction of `□` with
/// eigenvalue `λ(l)`.
pub fn poisson_extend(f: &BoundaryPoly, l: Complex, ctx: &QContext) -> Result<PolarFunction> {
    let mut u = PolarFunction::zero(ctx);
    for (&k, &c) in &f.laurent {
        let s: Vec<Complex> = poisson_mode(l + 1.0, k, ctx).into_iter().map(|v| v * c).collect();
        u = u.add(&PolarFunction::from_samples(ctx, k, s)?)?;
    }
    Ok(u)
}

/// `φ_l(q^{2n}) = y^{l+1} Σ_k [(q^{2l+2};q^2)_k/(q^2;q^2)_k]^2 q^{-2(2l+1)k} (y;q^{-2})_k`.
pub fn spherical_phi(l: Complex, ctx: &QContext) -> Result<PolarFunction> {
    PolarFunction::from_samples(ctx, 0, poisson_mode(l + 1.0, 0, ctx))
}

/// `φ_l(q^{2n}) = ₃Φ₂[q^{-2n}, q^{-2l}, q^{2l+2}; q^2, 0; q^2; q^2]`. The
/// terms alternate in sign and grow, so this is only useful for small `n`.
pub fn spherical_phi_hyper(l: Complex, n: usize, q: f64) -> Result<Complex> {
    let q2 = q * q;
    let upper = [
        Complex::new(q2.powi(-(n as i32)), 0.0),
        real_pow(q2, -l),
        real_pow(q2, l + 1.0),
    ];
    let lower = [Complex::new(q2, 0.0), Complex::default()];
    basic_hyper(&upper, &lower, q2, Complex::new(q2, 0.0), n + 2, 0.0)
}

/// `b_r u` on the circle with `1 - r^2 = q^{2n}`: mode `j > 0` gives
/// `r^j ψ_j(q^{2n})`, mode `-j` gives `r^j ψ_{-j}(q^{2(n-j)})`, which is
/// zero off the lattice, i.e. for `n < j`.
pub fn radius_restrict(u: &PolarFunction, n: usize) -> BoundaryPoly {
    let q2 = u.ctx().q2();
    let r = (1.0 - q2.powi(n as i32)).sqrt();
    let mut out = BoundaryPoly::zero();
    for (m, rad) in u.modes() {
        let j = m.unsigned_abs() as usize;
        let level = if m >= 0 { Some(n) } else { n.checked_sub(j) };
        if let Some(lv) = level {
            if lv < rad.samples.len() {
                out.add_mode(m, rad.samples[lv] * r.powi(j as i32));
            }
        }
    }
    out
}

/// `(1 - r^2)^l b_r u / c(l)` at level `n`.
pub fn recover_at(u: &PolarFunction, l: Complex, n: usize, c: Complex) -> BoundaryPoly {
    let q2 = u.ctx().q2();
    radius_restrict(u, n).scale(real_pow(q2, l * n as f64) / c)
}

/// Boundary values of an eigenfunction `u = poisson_extend(f, l)` for
/// `Re l > -1/2`, estimated at the two outermost levels. Fails with
/// [`Error::Divergence`] when the estimates differ by more than `tol`.
pub fn boundary_recover(u: &PolarFunction, l: Complex, tol: f64) -> Result<BoundaryPoly> {
    if l.re <= -0.5 {
        return Err(Error::InvalidContext(format!("recovery needs Re l > -1/2, got {l}")));
    }
    let ctx = u.ctx();
    let n = ctx.radial_levels;
    if n < 2 {
        return Err(Error::InvalidContext("need at least two radial levels".into()));
    }
    let c = c_function(l, ctx.q, ctx.series_tol)?;
    let a = recover_at(u, l, n - 1, c);
    let b = recover_at(u, l, n - 2, c);
    let diff = a.max_abs_diff(&b);
    if diff > tol {
        return Err(Error::Divergence(format!(
            "boundary limit not settled: consecutive estimates differ by {diff:e}"
        )));
    }
    Ok(a)
}

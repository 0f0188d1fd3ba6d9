//! `□ = -∂̄*∂̄` restricted to one angular sector.
//!
//! Sector `m` holds `z^m ψ(y)` for `m >= 0` and `ψ(y) z*^{-m}` for `m < 0`,
//! with `ψ` sampled at `y = q^{2n}`. `∂̄` maps sector `m` of `L²(dν)` to the
//! coefficients of sector `m + 1` of `(0,1)`-forms in `L²(dμ)`.

use crate::error::Result;
use crate::forms::dbar_polar;
use crate::ncpoly::{Measure, PolarFunction};
use crate::qspecial::{qpoch_real, Complex, QContext};
use nalgebra::{DMatrix, DVector};

/// Norm density of mode `p` at level `n`: `‖f‖² = Σ_n w(n) |ψ(n)|²` with
/// `w(n) = (1-q^2) (q^{2n+2}; q^2)_{|p|} q^{2sn}`, times `q^{2s|p|}` when
/// `p < 0`, where `s = 1` for `μ` and `s = -1` for `ν`.
pub fn sector_weight(q2: f64, p: i64, n: usize, measure: Measure) -> f64 {
    let s = match measure {
        Measure::Mu => 1,
        Measure::Nu => -1,
    };
    let k = p.unsigned_abs() as usize;
    let mut w = (1.0 - q2) * qpoch_real(q2.powi(n as i32 + 1), q2, k) * q2.powi(s * n as i32);
    if p < 0 {
        w *= q2.powi(s * k as i32);
    }
    w
}

/// Matrix of `∂̄` on sector `m`, in the lattice indicator bases: column `c`
/// is `∂^{(r)}/∂z*` of the indicator of level `c`, sampled on `N + 1` levels
/// of sector `m + 1`.
pub fn dbar_sector(m: i64, ctx: &QContext) -> Result<DMatrix<Complex>> {
    let n = ctx.radial_levels;
    let mut wide = *ctx;
    wide.radial_levels = n + 1;
    wide.angular_cutoff = ctx.angular_cutoff.max(m.unsigned_abs() as usize + 1);
    let mut b = DMatrix::zeros(n + 1, n);
    for c in 0..n {
        let e = PolarFunction::from_fn(&wide, m, |k| {
            Complex::new(if k == c { 1.0 } else { 0.0 }, 0.0)
        })?;
        let col = dbar_polar(&e)?.samples(m + 1);
        for (r, v) in col.into_iter().enumerate() {
            b[(r, c)] = v;
        }
    }
    Ok(b)
}

#[derive(Debug, Clone)]
pub struct SectorOperator {
    pub m: i64,
    pub q: f64,
    /// `(N + 1) × N` matrix of `∂̄`.
    pub dbar: DMatrix<Complex>,
    /// `ν`-weights of sector `m`.
    pub w_nu: DVector<f64>,
    /// `μ`-weights of sector `m + 1`.
    pub w_mu: DVector<f64>,
    /// `N × N` matrix of `□`.
    pub a: DMatrix<Complex>,
}

impl SectorOperator {
    pub fn new(m: i64, ctx: &QContext) -> Result<Self> {
        let n = ctx.radial_levels;
        let q2 = ctx.q2();
        let dbar = dbar_sector(m, ctx)?;
        let w_nu = DVector::from_fn(n, |i, _| sector_weight(q2, m, i, Measure::Nu));
        let w_mu = DVector::from_fn(n + 1, |i, _| sector_weight(q2, m + 1, i, Measure::Mu));
        let adj = Self::adjoint_of(&dbar, &w_nu, &w_mu);
        let a = -(&adj * &dbar);
        Ok(SectorOperator {
            m,
            q: ctx.q,
            dbar,
            w_nu,
            w_mu,
            a,
        })
    }

    // W_ν^{-1} B^H W_μ
    fn adjoint_of(b: &DMatrix<Complex>, w_nu: &DVector<f64>, w_mu: &DVector<f64>) -> DMatrix<Complex> {
        let mut adj = b.adjoint();
        for r in 0..adj.nrows() {
            for c in 0..adj.ncols() {
                adj[(r, c)] *= w_mu[c] / w_nu[r];
            }
        }
        adj
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Matrix of `∂̄*` from `(0,1)`-coefficients back to sector `m`.
    pub fn dbar_adjoint(&self) -> DMatrix<Complex> {
        Self::adjoint_of(&self.dbar, &self.w_nu, &self.w_mu)
    }

    /// `∂̄` in orthonormalized bases, `W_μ^{1/2} B W_ν^{-1/2}`.
    pub fn normalized_dbar(&self) -> DMatrix<Complex> {
        let mut b = self.dbar.clone();
        for r in 0..b.nrows() {
            for c in 0..b.ncols() {
                b[(r, c)] *= (self.w_mu[r] / self.w_nu[c]).sqrt();
            }
        }
        b
    }

    /// Extreme eigenvalues of `∂̄*∂̄` on the truncated sector.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let s = self.normalized_dbar().singular_values();
        let lo = s.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = s.iter().cloned().fold(0.0, f64::max);
        (lo * lo, hi * hi)
    }

    /// `⟨∂̄v, ∂̄v⟩_μ / ⟨v, v⟩_ν`.
    pub fn rayleigh(&self, v: &DVector<Complex>) -> f64 {
        let bv = &self.dbar * v;
        let num: f64 = bv.iter().zip(self.w_mu.iter()).map(|(x, w)| x.norm_sqr() * w).sum();
        let den: f64 = v.iter().zip(self.w_nu.iter()).map(|(x, w)| x.norm_sqr() * w).sum();
        num / den
    }

    pub fn apply(&self, psi: &[Complex]) -> Vec<Complex> {
        let v = DVector::from_column_slice(psi);
        (&self.a * v).iter().cloned().collect()
    }

    /// Solves `□ψ = φ` on the truncated sector.
    pub fn solve(&self, phi: &[Complex]) -> Option<Vec<Complex>> {
        let v = DVector::from_column_slice(phi);
        self.a.clone().lu().solve(&v).map(|x| x.iter().cloned().collect())
    }
}

/// Levels `0..interior_levels(ctx)` of `□ψ` are unaffected by truncation.
pub fn interior_levels(ctx: &QContext) -> usize {
    ctx.radial_levels.saturating_sub(1)
}

/// `‖a - b‖ / ‖b‖` in `L²(measure)` over levels `0..levels` of every mode.
pub fn weighted_residual(a: &PolarFunction, b: &PolarFunction, measure: Measure, levels: usize) -> f64 {
    let q2 = a.ctx().q2();
    let mut modes = a.mode_indices();
    modes.extend(b.mode_indices());
    modes.sort_unstable();
    modes.dedup();
    let (mut num, mut den) = (0.0, 0.0);
    for m in modes {
        let (x, y) = (a.samples(m), b.samples(m));
        for n in 0..levels.min(x.len()) {
            let w = sector_weight(q2, m, n, measure);
            num += (x[n] - y[n]).norm_sqr() * w;
            den += y[n].norm_sqr() * w;
        }
    }
    if den == 0.0 {
        return num.sqrt();
    }
    (num / den).sqrt()
}

/// Sector-wise `□f`.
pub fn box_apply(f: &PolarFunction) -> Result<PolarFunction> {
    let ctx = f.ctx();
    let mut out = PolarFunction::zero(ctx);
    for m in f.mode_indices() {
        let op = SectorOperator::new(m, ctx)?;
        out.set_samples(m, op.apply(&f.samples(m)))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_hold_per_sector() {
        let q = 0.5;
        let ctx = QContext::new(q, 32, 6).unwrap();
        let (lo, hi) = (1.0 / (1.0 + q).powi(2), 1.0 / (1.0 - q).powi(2));
        for m in -6..=6 {
            let (a, b) = SectorOperator::new(m, &ctx).unwrap().spectral_bounds();
            assert!(a >= lo - 1e-10 && b <= hi + 1e-10, "sector {m}: {a} {b}");
        }
    }

    #[test]
    fn box_kills_constants() {
        let ctx = QContext::new(0.5, 24, 2).unwrap();
        let one = PolarFunction::from_fn(&ctx, 0, |_| Complex::new(1.0, 0.0)).unwrap();
        let b = box_apply(&one).unwrap();
        let s = b.samples(0);
        for v in &s[..interior_levels(&ctx)] {
            assert!(v.norm() < 1e-10);
        }
    }

    #[test]
    fn adjoint_consistency() {
        let ctx = QContext::new(0.6, 16, 3).unwrap();
        for m in [-2, 0, 1] {
            let op = SectorOperator::new(m, &ctx).unwrap();
            let f = DVector::from_fn(16, |i, _| Complex::new((i as f64).sin(), (i as f64 * 0.3).cos()));
            let g = DVector::from_fn(17, |i, _| Complex::new(1.0 / (i as f64 + 1.0), 0.5));
            let bf = &op.dbar * &f;
            let lhs: Complex = bf.iter().zip(g.iter()).zip(op.w_mu.iter()).map(|((a, b), w)| b.conj() * a * w).sum();
            let sg = op.dbar_adjoint() * &g;
            let rhs: Complex = f.iter().zip(sg.iter()).zip(op.w_nu.iter()).map(|((a, b), w)| b.conj() * a * w).sum();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}

//! The Green function of `□`, the Poisson and `∂̄` solvers, and the Bergman
//! projection.

use super::sector::{sector_weight, SectorOperator};
use crate::error::{Error, Result};
use crate::forms::{dbar_polar, del_polar};
use crate::ncpoly::{green_coefficient, BiKernel, KernelSpec, Measure, NormalPoly, PolarFunction, YPoly};
use crate::qspecial::{Complex, QContext};
use serde::{Deserialize, Serialize};

/// Number of terms `G_m` kept in the Green series. The weights decay like
/// `q^{2m}`.
pub const DEFAULT_GREEN_CUTOFF: usize = 40;

/// `G = -Σ_{m=1}^{cutoff} (q^{-2} - 1)/(q^{-2m} - 1) G_m` from the closed
/// expansion of each `G_m`.
pub fn green_kernel(ctx: &QContext, cutoff: usize) -> Result<BiKernel> {
    if cutoff == 0 {
        return Err(Error::InvalidContext("Green series cutoff must be at least 1".into()));
    }
    BiKernel::geometric(KernelSpec::GreenFunction { cutoff }, ctx)
}

/// The same series with every `G_m` built as a braces product of geometric
/// kernels.
pub fn green_kernel_braces(ctx: &QContext, cutoff: usize) -> Result<BiKernel> {
    if cutoff == 0 {
        return Err(Error::InvalidContext("Green series cutoff must be at least 1".into()));
    }
    let mut k = BiKernel::new(ctx.q, ctx.radial_levels);
    for m in 1..=cutoff {
        let c = Complex::new(-green_coefficient(ctx.q, m), 0.0);
        k = k.add(&BiKernel::green_term(ctx, m)?.scale(c));
    }
    Ok(k)
}

/// `□^{-1} f = ∫ G(z, ζ) f(ζ) dν` through a prebuilt kernel.
pub fn poisson_solve_with(kernel: &BiKernel, f: &PolarFunction) -> Result<PolarFunction> {
    kernel.integrate(f, Measure::Nu)
}

/// `□^{-1} f` by the kernel integral.
pub fn poisson_solve(f: &PolarFunction) -> Result<PolarFunction> {
    poisson_solve_with(&green_kernel(f.ctx(), DEFAULT_GREEN_CUTOFF)?, f)
}

/// `□^{-1} f` by solving each truncated sector system.
pub fn poisson_solve_direct(f: &PolarFunction) -> Result<PolarFunction> {
    let ctx = f.ctx();
    let mut out = PolarFunction::zero(ctx);
    for m in f.mode_indices() {
        let op = SectorOperator::new(m, ctx)?;
        let u = op
            .solve(&f.samples(m))
            .ok_or_else(|| Error::Mismatch(format!("sector {m} system is singular")))?;
        out.set_samples(m, u)?;
    }
    Ok(out)
}

/// In sector `p`, `□ = q^{2|p|} y^2 ∂^{(r)}/∂z* ∂^{(l)}/∂z`; multiplies mode
/// `p` by `q^{2|p|} y^2`.
fn lift(f: &PolarFunction) -> PolarFunction {
    let q2 = f.ctx().q2();
    f.map_samples(|p, n, v| v * q2.powi(p.unsigned_abs() as i32 + 2 * n as i32))
}

/// The solution of `∂̄u = f dz*` orthogonal to the holomorphic functions:
/// `u = ∂^{(l)}/∂z □^{-1}(q^{2|p|} y^2 f)` sectorwise.
pub fn dbar_solve_with(kernel: &BiKernel, f: &PolarFunction) -> Result<PolarFunction> {
    del_polar(&poisson_solve_with(kernel, &lift(f))?)
}

pub fn dbar_solve(f: &PolarFunction) -> Result<PolarFunction> {
    dbar_solve_with(&green_kernel(f.ctx(), DEFAULT_GREEN_CUTOFF)?, f)
}

/// Largest `|⟨u, z^p⟩_μ|` over the holomorphic modes `p >= 0` of `u`.
pub fn holomorphic_overlap(u: &PolarFunction) -> f64 {
    let q2 = u.ctx().q2();
    u.modes()
        .filter(|(p, _)| *p >= 0)
        .map(|(p, r)| {
            r.samples
                .iter()
                .enumerate()
                .map(|(n, v)| v * sector_weight(q2, p, n, Measure::Mu))
                .sum::<Complex>()
                .norm()
        })
        .fold(0.0, f64::max)
}

/// Bergman projection by the kernel `K_q(z, ζ) = (1 - zζ*)^{-1}(1 - q^2 zζ*)^{-1}`
/// against `dμ`.
pub fn bergman_project_polar(f: &PolarFunction) -> Result<PolarFunction> {
    BiKernel::geometric(KernelSpec::Bergman, f.ctx())?.integrate(f, Measure::Mu)
}

/// Exact Bergman projection: `z^m ψ(y) -> z^m μ(z*^m z^m ψ) / μ(z*^m z^m)`.
pub fn bergman_project(f: &NormalPoly, ctx: &QContext) -> Result<NormalPoly> {
    let q = ctx.q;
    let q2 = ctx.q2();
    let pf = PolarFunction::from_normal(f, ctx)?;
    let mut out = NormalPoly::zero(q);
    for (m, r) in pf.modes() {
        if m < 0 {
            continue;
        }
        let psi = r.poly.clone().ok_or(Error::NotPolynomial { mode: m })?;
        // z*^m z^m = (q^2 y; q^2)_m
        let w = YPoly::qpoch(q2, q2, m as usize);
        let g = PolarFunction::from_ypoly(ctx, 0, psi.mul(&w))?;
        let c = crate::quad::mu(&g)? * (1.0 - q2.powi(m as i32 + 1)) / (1.0 - q2);
        out.add_term(m as usize, 0, c);
    }
    Ok(out)
}

/// Terms of the reproducing formula `f = P f + u[∂^{(r)} f/∂z*]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reproduction {
    /// `-(1/2πi) ∫ (1 - zζ*)^{-1}(1 - q^{-2}zζ*)^{-1} dζ f(ζ) dζ*`
    pub projection: PolarFunction,
    /// `∂̄`-solution with right-hand side `∂^{(r)} f/∂z*`.
    pub correction: PolarFunction,
    /// Largest interior `|f - projection - correction|` relative to `max|f|`.
    pub residual: f64,
}

/// Evaluates both terms of the Cauchy-Green formula for `f`. Moving `dζ` to
/// the left of the kernel turns `z^n ζ*^n` into `q^{2n} z^n ζ*^n`, which is
/// what [`BiKernel::twisted`] does.
pub fn reproduce_check(f: &PolarFunction) -> Result<Reproduction> {
    let ctx = f.ctx();
    let kernel = BiKernel::geometric(KernelSpec::CauchyGreen, ctx)?.twisted();
    // -(1/2πi) ∫ dζ·g·dζ* = μ(g)
    let projection = kernel.integrate(f, Measure::Mu)?;
    let correction = dbar_solve(&dbar_polar(f)?)?;
    let interior = ctx.radial_levels.saturating_sub(3);
    let total = projection.add(&correction)?;
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut modes = f.mode_indices();
    modes.extend(total.mode_indices());
    for m in modes {
        let a = f.samples(m);
        let b = total.samples(m);
        for n in 0..interior {
            err = err.max((a[n] - b[n]).norm());
            scale = scale.max(a[n].norm());
        }
    }
    Ok(Reproduction {
        projection,
        correction,
        residual: err / scale.max(f64::MIN_POSITIVE),
    })
}

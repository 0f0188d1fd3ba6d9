//! Integrals over the quantum disc and its boundary.
//!
//! All lattice sums have the shape `c Σ_n ψ_0(q^{2n}) q^{2ns}` over the
//! mode-zero radial part. Closed polynomial radial parts are summed exactly;
//! sample-only parts are summed over the truncation, with the tail checked.

use crate::error::{Error, Result};
use crate::forms::{dbar_polar, sigma, sigma_inv, DiffForm};
use crate::ncpoly::{BoundaryPoly, NormalPoly, PolarFunction};
use crate::qspecial::{Complex, QContext};
use crate::rep::RepMatrix;
use std::f64::consts::PI;

pub use crate::ncpoly::Measure;

/// Terms of the last `TAIL_WINDOW` levels must be negligible for a
/// sample-only sum to count as convergent.
const TAIL_WINDOW: usize = 4;
const TAIL_TOL: f64 = 1e-10;

/// Which of the weighted inner products to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    /// Functions: weight `(1 - zz*)^{λ-2}`.
    Functions,
    /// `(0,1)`-forms: weight `(1 - zz*)^λ`.
    Forms01,
}

/// `Σ_n ψ_0(q^{2n}) q^{2ns}` for the mode-zero part of `f`.
pub fn lattice_sum(f: &PolarFunction, s: f64) -> Result<Complex> {
    let ctx = f.ctx();
    let q2 = ctx.q2();
    let Some(r) = f.mode(0) else {
        return Ok(Complex::default());
    };
    if let Some(p) = &r.poly {
        let mut total = Complex::default();
        for (deg, &c) in p.0.iter().enumerate() {
            if c == Complex::default() {
                continue;
            }
            let e = deg as f64 + s;
            if e <= 0.0 {
                return Err(Error::Divergence(format!(
                    "y^{deg} against q^{{2n({s})}} is not summable"
                )));
            }
            total += c / (1.0 - q2.powf(e));
        }
        return Ok(total);
    }
    let terms: Vec<Complex> = r
        .samples
        .iter()
        .enumerate()
        .map(|(n, &v)| v * q2.powf(n as f64 * s))
        .collect();
    let sum: Complex = terms.iter().sum();
    let tail = terms
        .iter()
        .rev()
        .take(TAIL_WINDOW)
        .map(|t| t.norm())
        .fold(0.0, f64::max);
    if !sum.is_finite() || tail > TAIL_TOL * sum.norm().max(1.0) {
        return Err(Error::Divergence(format!(
            "partial sums not Cauchy: tail term {tail:e} at {} levels",
            ctx.radial_levels
        )));
    }
    Ok(sum)
}

/// Lebesgue integral `μ(f) = (1 - q^2) Σ ψ_0(q^{2n}) q^{2n}`.
pub fn mu(f: &PolarFunction) -> Result<Complex> {
    Ok(lattice_sum(f, 1.0)? * (1.0 - f.ctx().q2()))
}

/// Invariant integral `ν(f) = (1 - q^2) Σ ψ_0(q^{2n}) q^{-2n}`.
pub fn nu(f: &PolarFunction) -> Result<Complex> {
    Ok(lattice_sum(f, -1.0)? * (1.0 - f.ctx().q2()))
}

pub fn integrate(f: &PolarFunction, measure: Measure) -> Result<Complex> {
    match measure {
        Measure::Mu => mu(f),
        Measure::Nu => nu(f),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidContext(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// `ν_α(f) = (1 - q^{4α}) Σ ψ_0(q^{2n}) q^{4αn}`.
pub fn nu_alpha(f: &PolarFunction, alpha: f64) -> Result<Complex> {
    check_alpha(alpha)?;
    let q2 = f.ctx().q2();
    Ok(lattice_sum(f, 2.0 * alpha)? * (1.0 - q2.powf(2.0 * alpha)))
}

/// `ν_α(f) = (1 - q^{4α}) tr T(f (1 - zz*)^{2α})`, the trace over the
/// sampled levels.
pub fn nu_alpha_trace(f: &PolarFunction, alpha: f64) -> Result<Complex> {
    check_alpha(alpha)?;
    let ctx = f.ctx();
    let q2 = ctx.q2();
    let weighted = f.map_samples(|_, n, v| v * q2.powf(2.0 * alpha * n as f64));
    let t = RepMatrix::from_polar(&weighted, ctx.radial_levels);
    Ok(t.matrix().trace() * (1.0 - q2.powf(2.0 * alpha)))
}

/// `∫ f2* f1 (1 - zz*)^{λ-2} dμ` for functions, `∫ f2* f1 (1 - zz*)^λ dμ`
/// for the coefficients of `(0,1)`-forms.
pub fn weighted_inner(
    f1: &PolarFunction,
    f2: &PolarFunction,
    lambda: f64,
    grade: Grade,
) -> Result<Complex> {
    let g = f2.adjoint().product(f1)?;
    let exponent = match grade {
        Grade::Functions => lambda - 2.0,
        Grade::Forms01 => lambda,
    };
    Ok(lattice_sum(&g, exponent + 1.0)? * (1.0 - g.ctx().q2()))
}

fn expect_shape(w: &DiffForm, top: bool) -> Result<()> {
    let ok = if top {
        w.f00.is_zero() && w.f10.is_zero() && w.f01.is_zero()
    } else {
        w.f00.is_zero() && w.f01.is_zero() && w.f11.is_zero()
    };
    if ok {
        Ok(())
    } else {
        let want = if top { "(1,1)" } else { "(1,0)" };
        Err(Error::Mismatch(format!("expected a form of bidegree {want}")))
    }
}

/// `∫ dz·f·dz* = -2πi μ(f)` on polar data.
pub fn top_integral_polar(f11: &PolarFunction) -> Result<Complex> {
    let q2 = f11.ctx().q2();
    if let Some(r) = f11.mode(0) {
        let abs: f64 = r
            .samples
            .iter()
            .enumerate()
            .map(|(n, v)| v.norm() * q2.powi(n as i32))
            .sum();
        if !abs.is_finite() {
            return Err(Error::NotSummable("Σ|ψ_0| q^{2n} is not finite".into()));
        }
    }
    Ok(Complex::new(0.0, -2.0 * PI) * mu(f11)?)
}

/// Integral of a `(1,1)`-form `dz·f·dz*`.
pub fn form_integral_11(w: &DiffForm, ctx: &QContext) -> Result<Complex> {
    expect_shape(w, true)?;
    top_integral_polar(&PolarFunction::from_normal(&w.f11, ctx)?)
}

/// The three placements `dz dz* f`, `dz·f·dz*`, `f dz dz*` of `f`,
/// integrated. They agree.
pub fn placement_integrals(f: &NormalPoly, ctx: &QContext) -> Result<[Complex; 3]> {
    let left = form_integral_11(&DiffForm::top(&sigma(f)), ctx)?;
    let middle = form_integral_11(&DiffForm::top(f), ctx)?;
    let right = form_integral_11(&DiffForm::top(&sigma_inv(f)), ctx)?;
    Ok([left, middle, right])
}

/// Restriction onto the boundary circle.
pub fn boundary_restrict(f: &NormalPoly) -> BoundaryPoly {
    BoundaryPoly::restrict(f)
}

/// Restriction of polar data: mode `m` contributes `ψ_m(0) e^{imθ}`. Modes
/// without a closed form are treated as finitely supported and vanish.
pub fn boundary_restrict_polar(f: &PolarFunction) -> BoundaryPoly {
    let mut out = BoundaryPoly::zero();
    for (m, r) in f.modes() {
        if let Some(p) = &r.poly {
            out.add_mode(m, p.eval(0.0));
        }
    }
    out
}

/// `∫_{∂U} dz·f = 2πi ∫_{∂U} (z f)|_{∂U} dθ/2π`.
pub fn boundary_integral_10(w: &DiffForm) -> Result<Complex> {
    expect_shape(w, false)?;
    let zf = NormalPoly::z(w.q()).multiply(&w.f10);
    Ok(Complex::new(0.0, 2.0 * PI) * boundary_restrict(&zf).mean())
}

/// `∫_{∂U} dz·f` for polar `f`: only mode `-1` of `f` survives.
pub fn boundary_integral_10_polar(f: &PolarFunction) -> Complex {
    Complex::new(0.0, 2.0 * PI) * boundary_restrict_polar(f).coeff(-1)
}

/// `|∫ dψ - ∫_{∂U} ψ|` for `ψ = dz·f`; on `(1,0)`-forms `dψ = ∂̄ψ`.
pub fn stokes_check(w: &DiffForm, ctx: &QContext) -> Result<f64> {
    expect_shape(w, false)?;
    let (_, delbar) = w.differentials();
    let inner = form_integral_11(&delbar, ctx)?;
    Ok((inner - boundary_integral_10(w)?).norm())
}

/// Stokes residual for `ψ = dz·f` with polar `f`.
pub fn stokes_check_polar(f: &PolarFunction) -> Result<f64> {
    // ∂̄(dz·f) = dz·(-∂^{(r)} f/∂z*)·dz*
    let f11 = dbar_polar(f)?.scale(Complex::new(-1.0, 0.0));
    let inner = top_integral_polar(&f11)?;
    Ok((inner - boundary_integral_10_polar(f)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: f64 = 0.5;

    fn ctx() -> QContext {
        QContext::new(Q, 64, 8).unwrap()
    }

    fn polar(s: &str) -> PolarFunction {
        let c = ctx();
        PolarFunction::from_normal(&NormalPoly::parse(s, &c).unwrap(), &c).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert!((mu(&polar("1")).unwrap().re - 1.0).abs() < 1e-15);
        assert_eq!(mu(&polar("z y^2")).unwrap(), Complex::default());
        let q2 = Q * Q;
        let v = mu(&polar("z*^2 z^2")).unwrap();
        assert!((v.re - (1.0 - q2) / (1.0 - q2 * q2 * q2)).abs() < 1e-15);
    }

    #[test]
    fn nu_examples() {
        let c = ctx();
        let ind = PolarFunction::from_fn(&c, 0, |n| Complex::new((n == 0) as u8 as f64, 0.0)).unwrap();
        assert!((nu(&ind).unwrap().re - (1.0 - Q * Q)).abs() < 1e-15);
        assert!((nu(&polar("y^2")).unwrap().re - 1.0).abs() < 1e-14);
        assert!(matches!(nu(&polar("1")), Err(Error::Divergence(_))));
        let ones = PolarFunction::from_fn(&c, 0, |_| Complex::new(1.0, 0.0)).unwrap();
        assert!(matches!(nu(&ones), Err(Error::Divergence(_))));
    }

    #[test]
    fn nu_alpha_routes() {
        assert!((nu_alpha(&polar("1"), 0.75).unwrap().re - 1.0).abs() < 1e-15);
        let f = polar("z*^2 z^2 + 2 y - z");
        let c = ctx();
        let sampled = PolarFunction::from_samples(&c, 0, f.samples(0)).unwrap();
        let a = nu_alpha(&sampled, 1.25).unwrap();
        let b = nu_alpha_trace(&f, 1.25).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!((nu_alpha(&f, 1.25).unwrap() - a).norm() < 1e-12);
    }

    #[test]
    fn weighted_inner_reductions() {
        let f1 = polar("y^2 z + y^3");
        let f2 = polar("(1+i) y^2 z + 2 y^2");
        let a = weighted_inner(&f1, &f2, 2.0, Grade::Functions).unwrap();
        let b = mu(&f2.adjoint().product(&f1).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-14);
        let c = weighted_inner(&f1, &f2, 0.0, Grade::Functions).unwrap();
        let d = nu(&f2.adjoint().product(&f1).unwrap()).unwrap();
        assert!((c - d).norm() < 1e-13);
        let e = weighted_inner(&f2, &f1, 0.0, Grade::Functions).unwrap();
        assert!((c - e.conj()).norm() < 1e-13);
    }

    #[test]
    fn top_form_integrals() {
        let c = ctx();
        let one = DiffForm::top(&NormalPoly::one(Q));
        assert!((form_integral_11(&one, &c).unwrap() - Complex::new(0.0, -2.0 * PI)).norm() < 1e-14);
        let y = DiffForm::top(&NormalPoly::y(Q));
        let want = Complex::new(0.0, -2.0 * PI * (1.0 - Q * Q) / (1.0 - Q.powi(4)));
        assert!((form_integral_11(&y, &c).unwrap() - want).norm() < 1e-14);
        let f = NormalPoly::parse("z^2 z*^2 + 3 z* z - z", &c).unwrap();
        let [a, b, d] = placement_integrals(&f, &c).unwrap();
        assert!((a - b).norm() < 1e-13 && (b - d).norm() < 1e-13);
        assert!(form_integral_11(&DiffForm::dz(Q), &c).is_err());
    }

    #[test]
    fn boundary_and_stokes() {
        let c = ctx();
        let p = |s: &str| NormalPoly::parse(s, &c).unwrap();
        let w = DiffForm::dz_left(&p("z*"));
        assert!((boundary_integral_10(&w).unwrap() - Complex::new(0.0, 2.0 * PI)).norm() < 1e-14);
        assert_eq!(boundary_integral_10(&DiffForm::dz_left(&p("z"))).unwrap(), Complex::default());
        assert!(stokes_check(&w, &c).unwrap() < 1e-12);
        for s in ["y z*", "y^2 z* + z^3 z*^2", "z*^3 z + y"] {
            assert!(stokes_check(&DiffForm::dz_left(&p(s)), &c).unwrap() < 1e-12, "{s}");
        }
        assert!(boundary_integral_10(&DiffForm::dz_left(&p("y z*"))).unwrap().norm() < 1e-15);
        let finite = PolarFunction::from_fn(&c, -1, |n| Complex::new(1.0 / (n as f64 + 1.0), 0.0))
            .unwrap()
            .map_samples(|_, n, v| if n < 10 { v } else { Complex::default() });
        assert!(stokes_check_polar(&finite).unwrap() < 1e-12);
        assert!(stokes_check_polar(&polar("z* + y z*")).unwrap() < 1e-12);
    }
}
